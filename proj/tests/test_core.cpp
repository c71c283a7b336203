#include "doctest.h"
#include "reference_values.hpp"

#include "tbpc/core.hpp"
#include "tbpc/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace tbpc;

namespace {

// exp(Theta t) from the eigendecomposition of the symmetric matrix Theta.
Eigen::Matrix2d eigen_exp(const ModelParams& p, double t) {
    Eigen::Matrix2d m;
    m << p.eta - p.delta, -p.eta, -p.eta, p.rho - p.eta + p.delta;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
    const Eigen::Vector2d e = (es.eigenvalues() * t).array().exp();
    return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("paper preset") {
    const auto p = ModelParams::paper_2015();
    CHECK(p.eta == 0.051);
    CHECK(p.delta == 0.05);
    CHECK(p.rho == 0.04);
    CHECK(p.theta == 0.5);
    CHECK(p.horizon == 30.0);
    CHECK(p.diffusivity == 0.01);
    CHECK(p.tax_threshold() == doctest::Approx(0.001 / 0.051).epsilon(1e-14));
    CHECK(p.terminal_ratio() == doctest::Approx(0.051));
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("validation names the field") {
    auto p = ModelParams::paper_2015();
    p.eta = 0.0;
    try {
        p.validate();
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
        CHECK(std::string(e.what()).find("eta") != std::string::npos);
    }
    p = ModelParams::paper_2015();
    p.theta = 1.5;
    CHECK_THROWS_AS(p.validate(), Error);
    p = ModelParams::paper_2015();
    p.diffusivity = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.diffusivity = 0.0;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("xi and coupling match the scipy oracle") {
    const auto p = ModelParams::paper_2015();
    CHECK(xi(p) == doctest::Approx(ref::xi).epsilon(1e-14));
    CHECK(terminal_coupling(p) == doctest::Approx(ref::kappa).epsilon(1e-12));
}

TEST_CASE("theta_exp agrees with an eigendecomposition") {
    const ModelParams cases[] = {
        ModelParams::paper_2015(),
        {0.2, 0.05, 0.03, 0.7, 10.0, 0.01},
        {0.01, 0.3, 0.5, 1.0, 5.0, 0.0},
        {0.06, 0.05, 0.02, 0.5, 30.0, 0.01},  // 2(delta-eta)+rho = 0
    };
    for (const auto& p : cases) {
        for (double t : {0.0, 1e-9, 0.5, 7.0, 15.0, 30.0}) {
            const auto m = theta_exp(p, t);
            const auto e = eigen_exp(p, t);
            const double scale = e.cwiseAbs().maxCoeff();
            CHECK(std::abs(m.e11 - e(0, 0)) <= 1e-12 * scale);
            CHECK(std::abs(m.e12 - e(0, 1)) <= 1e-12 * scale);
            CHECK(std::abs(m.e21 - e(1, 0)) <= 1e-12 * scale);
            CHECK(std::abs(m.e22 - e(1, 1)) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("printed matrix is half the exponential") {
    const auto p = ModelParams::paper_2015();
    for (double t : {0.0, 3.0, 30.0}) {
        const auto a = theta_exp(p, t);
        const auto b = theta_exp_printed(p, t);
        CHECK(b.e11 == doctest::Approx(0.5 * a.e11).epsilon(1e-14));
        CHECK(b.e12 == doctest::Approx(0.5 * a.e12).epsilon(1e-14));
        CHECK(b.e22 == doctest::Approx(0.5 * a.e22).epsilon(1e-14));
    }
}

TEST_CASE("grids") {
    const auto p = ModelParams::paper_2015();
    const auto g = make_grid(SpatialDomain::bounded(-1, 1), p, 201, 301);
    CHECK(g.times.front() == 0.0);
    CHECK(g.times.back() == p.horizon);
    CHECK(g.positions.front() == -1.0);
    CHECK(g.positions.back() == 1.0);
    CHECK(g.dt() == doctest::Approx(0.1));
    CHECK_NOTHROW(validate_grid(g));
    auto bad = g;
    bad.positions[3] += 1e-3;
    CHECK_THROWS_AS(validate_grid(bad), Error);
    CHECK_THROWS_AS(make_grid(SpatialDomain::bounded(-1, 1), p, 2, 10), Error);
    CHECK_THROWS_AS(SpatialDomain::bounded(1, -1), Error);
}

TEST_CASE("profiles") {
    const auto b = InitialProfile::centered_bump(400.23);
    CHECK(b(0.0) == doctest::Approx(1.25 * 400.23));
    CHECK(b.far_left() == doctest::Approx(0.75 * 400.23));
    CHECK_FALSE(b.is_homogeneous());
    CHECK(InitialProfile::constant(3.0).is_homogeneous());

    const auto t = InitialProfile::tabulated({0.0, 1.0, 2.0}, {1.0, 3.0, 2.0});
    CHECK(t(0.5) == doctest::Approx(2.0));
    CHECK(t(-5.0) == 1.0);
    CHECK(t(9.0) == 2.0);
    CHECK(t.upper_bound() == 3.0);
    CHECK(t.lower_bound() == 1.0);
    CHECK(t.kinks().size() == 3);
    CHECK_THROWS_AS(InitialProfile::tabulated({0.0, 0.0}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(InitialProfile::tabulated({0.0, 1.0}, {1.0}), Error);
}

TEST_CASE("tau is absent where p vanishes") {
    const auto g = make_grid(0.0, 1.0, 1.0, 3, 2);
    Field2D p(2, 3, 1.0), u(2, 3, 0.5);
    p(1, 2) = 1e-14;
    const auto f = make_solution_field(g, p, u, Provenance::SpectralLocal, 1.0);
    CHECK(f.has_tax(0, 0));
    CHECK(f.tau(0, 0) == 0.5);
    CHECK_FALSE(f.has_tax(1, 2));
}

TEST_CASE("simpson and trapezoid weights") {
    for (std::size_t n : {5u, 6u, 101u, 102u}) {
        const double h = 2.0 / static_cast<double>(n - 1);
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -1.0 + h * static_cast<double>(i);
            v[i] = x * x * x + 2 * x * x + 1;
        }
        CHECK(numerics::simpson(v, h) == doctest::Approx(2.0 + 4.0 / 3.0).epsilon(1e-13));
    }
    const auto w = numerics::trapezoid_weights(4, 1.0);
    CHECK(w[0] == 0.5);
    CHECK(w[1] == 1.0);
}

TEST_CASE("gauss hermite moments") {
    const auto& r = numerics::gauss_hermite(64);
    double m0 = 0, m2 = 0, m4 = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double x = r.nodes[i];
        m0 += r.weights[i];
        m2 += r.weights[i] * x * x;
        m4 += r.weights[i] * x * x * x * x;
    }
    const double sp = std::sqrt(std::numbers::pi);
    CHECK(m0 == doctest::Approx(sp).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(sp / 2).epsilon(1e-14));
    CHECK(m4 == doctest::Approx(3 * sp / 4).epsilon(1e-13));
}

TEST_CASE("tridiagonal solve") {
    const std::vector<double> lo{0, -1, -1, -1}, di{4, 4, 4, 4}, up{-1, -1, -1, 0};
    const std::vector<double> x{1, 2, 3, 4};
    std::vector<double> rhs(4);
    for (int i = 0; i < 4; ++i) {
        rhs[i] = di[i] * x[i];
        if (i > 0) rhs[i] += lo[i] * x[i - 1];
        if (i < 3) rhs[i] += up[i] * x[i + 1];
    }
    numerics::solve_tridiagonal(lo, di, up, rhs);
    for (int i = 0; i < 4; ++i) CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-14));
}

TEST_CASE("counter rng and hash") {
    numerics::CounterRng a(7, 11), b(7, 11), c(8, 11);
    const double ua = a.uniform(5);
    CHECK(ua == b.uniform(5));
    CHECK(ua != c.uniform(5));
    CHECK(ua > 0.0);
    CHECK(ua < 1.0);
    CHECK(numerics::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(numerics::fnv1a64("") == 0xcbf29ce484222325ULL);
}

}  // TEST_SUITE
