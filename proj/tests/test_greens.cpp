#include "doctest.h"
#include "reference_values.hpp"

#include "tbpc/analysis.hpp"
#include "tbpc/greens.hpp"

#include <cmath>

using namespace tbpc;

namespace {
const auto kParams = ModelParams::paper_2015();
const auto kBump = InitialProfile::centered_bump(kPaperInitialLevel);
}  // namespace

TEST_SUITE("greens") {

TEST_CASE("kernel of a constant is the constant") {
    const auto c = InitialProfile::constant(7.5);
    for (auto m : {greens::KernelEvaluator::gauss_hermite(), greens::KernelEvaluator::adaptive()})
        CHECK(greens::heat_convolve(c, 0.01, 3.0, 0.2, m).value == doctest::Approx(7.5).epsilon(1e-13));
}

TEST_CASE("gaussian case is exact") {
    const double gh = greens::heat_convolve(kBump, 0.01, 5.0, 0.3).value;
    const double ad = greens::heat_convolve(kBump, 0.01, 5.0, 0.3, greens::KernelEvaluator::adaptive()).value;
    CHECK(gh == doctest::Approx(ref::heat_bump_x03_t5).epsilon(1e-12));
    CHECK(ad == doctest::Approx(ref::heat_bump_x03_t5).epsilon(1e-11));
    CHECK(greens::heat_convolve(kBump, 0.01, 0.0, 0.3).value == kBump(0.3));
}

TEST_CASE("monte carlo: agreement, determinism, seed sensitivity") {
    const auto mc = greens::KernelEvaluator::monte_carlo(100000, 2015);
    const auto a = greens::heat_convolve(kBump, 0.01, 5.0, 0.3, mc);
    const auto b = greens::heat_convolve(kBump, 0.01, 5.0, 0.3, mc);
    CHECK(a.value == b.value);
    CHECK(a.std_error > 0.0);
    CHECK(std::abs(a.value - ref::heat_bump_x03_t5) <= 3.0 * a.std_error);
    const auto c = greens::heat_convolve(kBump, 0.01, 5.0, 0.3, greens::KernelEvaluator::monte_carlo(100000, 7));
    CHECK(c.value != a.value);
    CHECK_THROWS_AS(greens::KernelEvaluator::monte_carlo(999, 1).validate(), Error);
}

TEST_CASE("adaptive quadrature handles kinks") {
    const auto tab = InitialProfile::tabulated({-0.5, 0.0, 0.5}, {1.0, 2.0, 1.0});
    const auto ad = greens::heat_convolve(tab, 0.01, 1.0, 0.0, greens::KernelEvaluator::adaptive(1e-12));
    const auto gh = greens::heat_convolve(tab, 0.01, 1.0, 0.0, greens::KernelEvaluator::gauss_hermite(200));
    CHECK(ad.value == doctest::Approx(ref::heat_hat_x0_t1).epsilon(1e-9));
    // Gauss-Hermite only converges algebraically across a kink.
    CHECK(std::abs(gh.value - ref::heat_hat_x0_t1) < 1e-3);
    CHECK(ad.value < 2.0);
    CHECK(ad.value > 1.0);
}

TEST_CASE("unbounded global field against the scipy Fourier oracle") {
    const greens::GlobalKernelSolution s(kParams, kBump);
    CHECK(s.u(0.0, 0.0) / s.p(0.0, 0.0) == doctest::Approx(ref::unbounded_tau0_center).epsilon(1e-8));
    CHECK(s.u(0.5, 0.0) / s.p(0.5, 0.0) == doctest::Approx(ref::unbounded_tau0_half).epsilon(1e-8));
    CHECK(s.u(1.0, 0.0) / s.p(1.0, 0.0) == doctest::Approx(ref::unbounded_tau0_one).epsilon(1e-8));
    CHECK(s.p(0.0, 30.0) == doctest::Approx(ref::unbounded_pT_center).epsilon(1e-8));
    CHECK(s.coupling() == doctest::Approx(ref::kappa).epsilon(1e-12));
}

TEST_CASE("homogeneous unbounded fields reduce to the aspatial path") {
    const auto g = make_grid(-1, 1, kParams.horizon, 11, 16);
    const auto prof = InitialProfile::constant(kPaperInitialLevel);
    const auto glob = greens::global_solution_unbounded(kParams, prof, g);
    const auto loc = greens::local_solution_unbounded(kParams, prof, g);
    const auto sol = aspatial::solve_aspatial_bvp(kParams, kPaperInitialLevel);
    CHECK(glob.p(15, 5) == doctest::Approx(sol.p(30.0)).epsilon(1e-10));
    CHECK(analysis::relative_gap(loc, glob) < 1e-8);
}

TEST_CASE("local unbounded field is the taxed kernel smoothing") {
    const auto g = make_grid(-1, 1, kParams.horizon, 5, 7);
    const auto loc = greens::local_solution_unbounded(kParams, kBump, g);
    const double h = greens::heat_convolve(kBump, kParams.diffusivity, 30.0, 0.0).value;
    CHECK(loc.p(6, 2) == doctest::Approx(ref::growth_T * h).epsilon(1e-9));
}

}  // TEST_SUITE
