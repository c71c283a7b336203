#include "doctest.h"

#include "tbpc/analysis.hpp"
#include "tbpc/aspatial.hpp"
#include "tbpc/pde_oracle.hpp"
#include "tbpc/spectral.hpp"

#include <cmath>
#include <random>

using namespace tbpc;

namespace {
const auto kParams = ModelParams::paper_2015();
const auto kDomain = SpatialDomain::bounded(-1.0, 1.0);
const auto kBump = InitialProfile::centered_bump(kPaperInitialLevel);
const auto kTax = [](double t) { return aspatial::tau_star(kParams, t); };
}  // namespace

TEST_SUITE("pde_oracle") {

TEST_CASE("neumann laplacian is self-adjoint in the trapezoid product") {
    const oracle::NeumannLaplacian L(17, 0.125);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<double> a(17), b(17), la(17), lb(17), adj(17);
    for (auto& v : a) v = U(gen);
    for (auto& v : b) v = U(gen);
    L.apply(a, la);
    L.apply(b, lb);
    CHECK(L.inner(la, b) == doctest::Approx(L.inner(a, lb)).epsilon(1e-12));
    L.adjoint(a, adj);
    for (std::size_t i = 0; i < 17; ++i) CHECK(adj[i] == doctest::Approx(la[i]).epsilon(1e-12));
    std::vector<double> one(17, 1.0), lone(17);
    L.apply(one, lone);
    for (double v : lone) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("homogeneous forward solve follows the aspatial path") {
    const auto g = make_grid(kDomain, kParams, 21, 201);
    const auto f = oracle::diffuse_forward(InitialProfile::constant(kPaperInitialLevel), kParams, kDomain, g,
                                           oracle::TaxPath{kTax});
    const auto sol = aspatial::solve_aspatial_bvp(kParams, kPaperInitialLevel);
    CHECK(f.provenance == Provenance::FdOracleLocal);
    CHECK(f.p(200, 10) == doctest::Approx(sol.p(30.0)).epsilon(1e-5));
    CHECK(f.p(200, 0) == doctest::Approx(f.p(200, 20)).epsilon(1e-13));
}

TEST_CASE("forward solve matches the spectral local field") {
    const auto g = make_grid(kDomain, kParams, 101, 101);
    const auto f = oracle::diffuse_forward(kBump, kParams, kDomain, g, oracle::TaxPath{kTax});
    const auto s = spectral::local_solution_bounded(kParams, kDomain, kBump, g);
    CHECK(analysis::relative_gap(f, s, false) < 1e-3);
}

TEST_CASE("the three source kinds agree") {
    const auto g = make_grid(kDomain, kParams, 41, 61);
    const auto a = oracle::diffuse_forward(kBump, kParams, kDomain, g, oracle::TaxPath{kTax});
    Field2D tau(g.nt(), g.nx());
    for (std::size_t n = 0; n < g.nt(); ++n)
        for (std::size_t i = 0; i < g.nx(); ++i) tau(n, i) = kTax(g.times[n]);
    const auto b = oracle::diffuse_forward(kBump, kParams, kDomain, g, oracle::TaxField{tau});
    const auto c = oracle::diffuse_forward(kBump, kParams, kDomain, g, oracle::ControlField{a.u});
    // The path is sampled at substep times, the field is interpolated between rows.
    CHECK(analysis::relative_gap(a, b) < 1e-6);
    CHECK(analysis::relative_gap(a, c, false) < 1e-3);

    const auto k = oracle::diffuse_forward(kBump, kParams, kDomain, g, oracle::TaxPath{[](double) { return 0.4; }});
    const auto kf = oracle::diffuse_forward(kBump, kParams, kDomain, g, oracle::TaxField{Field2D(g.nt(), g.nx(), 0.4)});
    CHECK(analysis::relative_gap(k, kf) < 1e-12);
}

TEST_CASE("sweep converges to the spectral global field") {
    oracle::SweepConfig cfg;
    cfg.nx = 101;
    cfg.nt = 101;
    const auto r = oracle::forward_backward_sweep(kBump, kParams, kDomain, cfg);
    CHECK(r.iterations <= 200);
    CHECK(r.final_change <= cfg.convergence_tol);
    CHECK(r.cost_history.size() == r.iterations + 1);
    CHECK(r.cost_history.back() < r.cost_history.front());
    CHECK(r.field.provenance == Provenance::FdOracleGlobal);
    const auto s = spectral::global_solution_bounded(kParams, kDomain, kBump, r.field.grid);
    CHECK(analysis::relative_gap(r.field, s) < 1e-3);
    const double w = kParams.terminal_weight();
    const std::size_t last = r.field.grid.nt() - 1;
    for (std::size_t i = 0; i < r.field.grid.nx(); i += 10)
        CHECK(r.costate.lambda(last, i) == doctest::Approx(w * r.field.p(last, i)).epsilon(1e-12));
}

TEST_CASE("sweep reports non-convergence") {
    oracle::SweepConfig cfg;
    cfg.nx = 31;
    cfg.nt = 31;
    cfg.max_iters = 1;
    cfg.convergence_tol = 1e-14;
    try {
        oracle::forward_backward_sweep(kBump, kParams, kDomain, cfg);
        FAIL("expected NotConverged");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotConverged);
    }
    cfg.relaxation = 0.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("unbounded window padding") {
    CHECK(oracle::unbounded_padding(kParams) == doctest::Approx(6.0 * std::sqrt(2.0 * 0.01 * 30.0)));
    const auto dom = SpatialDomain::unbounded(1.0);
    const auto g = make_grid(dom, kParams, 41, 61);
    const auto f = oracle::diffuse_forward(InitialProfile::constant(kPaperInitialLevel), kParams, dom, g,
                                           oracle::TaxPath{kTax});
    CHECK(f.p(60, 0) == doctest::Approx(f.p(60, 20)).epsilon(1e-12));
}

TEST_CASE("grid horizon must match the model") {
    const auto g = make_grid(-1, 1, 10.0, 11, 11);
    CHECK_THROWS_AS(oracle::diffuse_forward(kBump, kParams, kDomain, g, oracle::TaxPath{kTax}), Error);
}

}  // TEST_SUITE
