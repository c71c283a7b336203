#include "doctest.h"
#include "reference_values.hpp"

#include "tbpc/analysis.hpp"
#include "tbpc/spectral.hpp"

#include <cmath>

using namespace tbpc;

namespace {
const auto kParams = ModelParams::paper_2015();
const auto kDomain = SpatialDomain::bounded(-1.0, 1.0);
const auto kBump = InitialProfile::centered_bump(kPaperInitialLevel);
}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("cosine coefficients of the bump") {
    const auto s = spectral::cosine_coeffs(kBump, kDomain, spectral::CosineBasis::FullNeumann, 64);
    CHECK(s.coeffs()[0] == doctest::Approx(ref::bump_A0).epsilon(1e-12));
    CHECK(std::abs(s.coeffs()[1]) < 1e-9);
    CHECK(s.coeffs()[2] == doctest::Approx(ref::bump_A2).epsilon(1e-10));
    // Nonzero edge slope: the cosine series converges only like 1/n^2 in sup norm.
    CHECK(s.reconstruction_error < 2.0);
    const auto c = spectral::cosine_coeffs(InitialProfile::constant(3.0), kDomain, spectral::CosineBasis::FullNeumann, 8);
    CHECK(c.coeffs()[0] == doctest::Approx(6.0).epsilon(1e-12));
    for (std::size_t n = 1; n <= 8; ++n) CHECK(std::abs(c.coeffs()[n]) < 1e-12);
}

TEST_CASE("heat series conserves mass") {
    const spectral::HeatSeries h(kBump, kDomain, kParams.diffusivity);
    for (double t : {0.5, 5.0, 30.0}) {
        const double m = [&] {
            double s = 0.0;
            const int n = 2000;
            for (int i = 0; i <= n; ++i) {
                const double x = -1.0 + 2.0 * i / n;
                s += (i == 0 || i == n ? 0.5 : 1.0) * h(x, t);
            }
            return s * 2.0 / n;
        }();
        CHECK(m == doctest::Approx(ref::bump_A0).epsilon(1e-6));
    }
    CHECK(h(0.3, 0.0) == kBump(0.3));
}

TEST_CASE("homogeneous global equals the aspatial path") {
    const auto g = make_grid(kDomain, kParams, 21, 31);
    const auto prof = InitialProfile::constant(kPaperInitialLevel);
    const auto glob = spectral::global_solution_bounded(kParams, kDomain, prof, g);
    const auto loc = spectral::local_solution_bounded(kParams, kDomain, prof, g);
    const auto sol = aspatial::solve_aspatial_bvp(kParams, kPaperInitialLevel);
    for (std::size_t n = 0; n < g.nt(); n += 5)
        for (std::size_t i = 0; i < g.nx(); i += 4) {
            CHECK(glob.p(n, i) == doctest::Approx(sol.p(g.times[n])).epsilon(1e-11));
            CHECK(glob.u(n, i) == doctest::Approx(sol.u(g.times[n])).epsilon(1e-11));
        }
    CHECK(analysis::relative_gap(loc, glob) < 1e-8);
}

TEST_CASE("bump global field against per-mode BVPs") {
    spectral::SpectralOptions o;
    o.modes = 127;
    const spectral::GlobalSpectralSolution s(kParams, kDomain, kBump, o);
    // p(x, 0) is the exact profile; the reference divides by the truncated series.
    CHECK(s.u(0.0, 0.0) / s.series()(0.0) == doctest::Approx(ref::bounded_tau0_center).epsilon(1e-9));
    CHECK(s.u(0.5, 0.0) / s.series()(0.5) == doctest::Approx(ref::bounded_tau0_half).epsilon(1e-9));
    const spectral::GlobalSpectralSolution d(kParams, kDomain, kBump);
    CHECK(d.p(0.0, 30.0) == doctest::Approx(ref::bounded_pT_center).epsilon(1e-9));
    CHECK(d.coupling() == doctest::Approx(ref::kappa).epsilon(1e-12));
    const auto b = d.printed_b_coefficients();
    CHECK(b[0] == doctest::Approx(ref::kappa * ref::bump_A0).epsilon(1e-12));
}

TEST_CASE("local field is the taxed heat flow") {
    const spectral::TaxedDiffusion loc(kParams, kDomain, kBump, [](double t) {
        return aspatial::tau_star(kParams, t);
    });
    const spectral::HeatSeries h(kBump, kDomain, kParams.diffusivity);
    CHECK(loc.p(0.2, 30.0) == doctest::Approx(ref::growth_T * h(0.2, 30.0)).epsilon(1e-9));
    CHECK(loc.u(0.2, 10.0) / loc.p(0.2, 10.0) == doctest::Approx(aspatial::tau_star(kParams, 10.0)).epsilon(1e-13));
}

TEST_CASE("paper basis agrees with the full basis on a symmetric profile") {
    spectral::SpectralOptions full, even;
    even.basis = spectral::CosineBasis::PaperEven;
    even.modes = 32;
    const spectral::GlobalSpectralSolution a(kParams, kDomain, kBump, full);
    const spectral::GlobalSpectralSolution b(kParams, kDomain, kBump, even);
    for (double x : {-0.7, 0.0, 0.4})
        for (double t : {1.0, 15.0, 30.0}) CHECK(b.p(x, t) == doctest::Approx(a.p(x, t)).epsilon(1e-8));
}

TEST_CASE("printed global form differs from the exact one for the bump") {
    const auto g = make_grid(kDomain, kParams, 41, 31);
    spectral::SpectralOptions printed;
    printed.form = spectral::GlobalForm::Printed;
    const auto exact = spectral::global_solution_bounded(kParams, kDomain, kBump, g);
    const auto typeset = spectral::global_solution_bounded(kParams, kDomain, kBump, g, printed);
    CHECK(analysis::relative_gap(typeset, exact) > 1e-3);
}

}  // TEST_SUITE
