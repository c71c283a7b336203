#include "doctest.h"

#include "tbpc/analysis.hpp"
#include "tbpc/aspatial.hpp"
#include "tbpc/pde_oracle.hpp"
#include "tbpc/spectral.hpp"

#include <cmath>

using namespace tbpc;

namespace {
const auto kParams = ModelParams::paper_2015();
const auto kDomain = SpatialDomain::bounded(-1.0, 1.0);
const auto kBump = InitialProfile::centered_bump(kPaperInitialLevel);
const auto kFlat = InitialProfile::constant(kPaperInitialLevel);

SolutionField constant_field(const Grid& g, double p, double u) {
    return make_solution_field(g, Field2D(g.nt(), g.nx(), p), Field2D(g.nt(), g.nx(), u), Provenance::SpectralLocal, p);
}
}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("cost of simple fields") {
    auto p = kParams;
    const auto g = make_grid(kDomain, p, 41, 301);
    CHECK(analysis::spatial_cost(p, constant_field(g, 0.0, 0.0)).total == 0.0);
    p.theta = 1.0;
    const auto c = analysis::spatial_cost(p, constant_field(g, 1.0, 0.0));
    CHECK(c.terminal == 0.0);
    CHECK(c.total == doctest::Approx(2.0 * (1.0 - std::exp(-p.rho * p.horizon)) / (2.0 * p.rho)).epsilon(1e-10));
    CHECK(c.total == c.running + c.terminal);
}

TEST_CASE("cost gap is antisymmetric") {
    const auto g = make_grid(kDomain, kParams, 41, 61);
    const auto a = spectral::local_solution_bounded(kParams, kDomain, kBump, g);
    const auto b = spectral::global_solution_bounded(kParams, kDomain, kBump, g);
    CHECK(analysis::cost_gap(kParams, a, b) == doctest::Approx(-analysis::cost_gap(kParams, b, a)));
    CHECK(analysis::cost_gap(kParams, a, a) == 0.0);
    CHECK(analysis::cost_gap(kParams, a, b) > 0.0);
}

TEST_CASE("cost refinement") {
    const auto coarse = make_grid(kDomain, kParams, 201, 201);
    const auto fine = make_grid(kDomain, kParams, 401, 401);
    const double a = analysis::spatial_cost(kParams, spectral::global_solution_bounded(kParams, kDomain, kBump, coarse)).total;
    const double b = analysis::spatial_cost(kParams, spectral::global_solution_bounded(kParams, kDomain, kBump, fine)).total;
    CHECK(std::abs(a - b) / b <= 1e-6);
}

TEST_CASE("local equals global") {
    const analysis::LocalGlobalOptions small{41, 61, 32};
    const auto flat = analysis::check_local_equals_global(kParams, kDomain, kFlat, small);
    CHECK(flat.holds);
    CHECK(flat.margin >= -1e-12);

    std::vector<double> xs, vs;
    for (int i = 0; i <= 20; ++i) {
        xs.push_back(-1.0 + 0.1 * i);
        vs.push_back(kPaperInitialLevel);
    }
    vs[7] += 1e-9;
    const auto nearly = analysis::check_local_equals_global(kParams, kDomain, InitialProfile::tabulated(xs, vs), small);
    CHECK(nearly.holds);

    const auto bump = analysis::check_local_equals_global(kParams, kDomain, kBump, small);
    CHECK_FALSE(bump.holds);
    CHECK(bump.details.find("cost_gap=") != std::string::npos);
}

TEST_CASE("foc residual separates local from global") {
    const spectral::GlobalSpectralSolution glob(kParams, kDomain, kBump);
    const spectral::TaxedDiffusion loc(kParams, kDomain, kBump, [](double t) { return aspatial::tau_star(kParams, t); });
    const std::vector<double> xs{-0.5, 0.0, 0.5}, ts{5.0, 15.0, 25.0};
    const double rg = analysis::global_foc_residual(
        kParams, [&](double x, double t) { return glob.p(x, t); }, [&](double x, double t) { return glob.u(x, t); },
        xs, ts, 0.01, 0.05);
    const double rl = analysis::global_foc_residual(
        kParams, [&](double x, double t) { return loc.p(x, t); }, [&](double x, double t) { return loc.u(x, t); },
        xs, ts, 0.01, 0.05);
    CHECK(rg < 1e-7);
    CHECK(rl > 1e-4);
}

TEST_CASE("aggregate decay") {
    const auto g = make_grid(kDomain, kParams, 41, 61);
    const auto strong = oracle::diffuse_forward(kBump, kParams, kDomain, g, oracle::TaxPath{[](double) { return 1.0; }});
    const auto r = analysis::check_aggregate_decay(kParams, strong);
    CHECK(r.asserted);
    CHECK(r.holds);

    const auto none = oracle::diffuse_forward(kFlat, kParams, kDomain, g, oracle::TaxPath{[](double) { return 0.0; }});
    const auto q = analysis::check_aggregate_decay(kParams, none);
    CHECK_FALSE(q.asserted);
    CHECK(q.margin < 0.0);
    CHECK(q.details.find("threshold=not-met") != std::string::npos);
    const auto tot = analysis::aggregate_pollution(none);
    CHECK(tot.back() > tot.front());
}

TEST_CASE("simpson and trapezoid totals agree") {
    const auto g = make_grid(kDomain, kParams, 401, 61);
    const auto f = spectral::global_solution_bounded(kParams, kDomain, kBump, g);
    const auto s = analysis::aggregate_pollution(f, analysis::SpatialRule::Simpson);
    const auto t = analysis::aggregate_pollution(f, analysis::SpatialRule::Trapezoid);
    for (std::size_t n = 0; n < s.size(); ++n) CHECK(std::abs(s[n] - t[n]) / s[n] <= 1e-6);
}

TEST_CASE("upper bound") {
    auto p = kParams;
    p.diffusivity = 0.0;
    const double tax = 0.3;
    const auto g = make_grid(kDomain, p, 41, 61);
    const auto tight = spectral::TaxedDiffusion(p, kDomain, kBump, [=](double) { return tax; }).sample(g, Provenance::SpectralLocal);
    const auto r = analysis::check_upper_bound(p, tight, kBump, kDomain);
    CHECK(r.holds);
    CHECK(std::abs(r.margin) <= 1e-10);

    const auto glob = spectral::global_solution_bounded(kParams, kDomain, kBump, g);
    CHECK(analysis::check_upper_bound(kParams, glob, kBump, kDomain).holds);
    const auto flat = spectral::global_solution_bounded(kParams, kDomain, kFlat, g);
    CHECK(analysis::check_upper_bound(kParams, flat, kFlat, kDomain).holds);
}

TEST_CASE("long-run cleanup") {
    const analysis::CleanupPolicy fixed{analysis::PolicyKind::FixedTax, 1.0};
    const auto r = analysis::check_longrun_cleanup(kParams, kDomain, kBump, {10, 20, 40}, fixed, 41, 81);
    CHECK(r.asserted);
    CHECK(r.holds);

    auto decaying = kParams;
    decaying.delta = 0.08;
    const analysis::CleanupPolicy none{analysis::PolicyKind::FixedTax, 0.0};
    const auto q = analysis::check_longrun_cleanup(decaying, kDomain, kBump, {10, 20, 40}, none, 41, 81);
    CHECK(q.asserted);
    CHECK(q.holds);
}

TEST_CASE("report line") {
    analysis::PropositionReport r{"upper_bound", true, true, 0.5, 1e-8, "x=1"};
    CHECK(r.to_line() == "upper_bound holds margin=0.5 tol=1e-08 x=1");
    r.asserted = false;
    CHECK(r.to_line().find("report-only") != std::string::npos);
}

TEST_CASE("checks are pure") {
    const auto g = make_grid(kDomain, kParams, 41, 61);
    const auto f = spectral::global_solution_bounded(kParams, kDomain, kBump, g);
    CHECK(analysis::check_upper_bound(kParams, f, kBump, kDomain).to_line() ==
          analysis::check_upper_bound(kParams, f, kBump, kDomain).to_line());
}

}  // TEST_SUITE
