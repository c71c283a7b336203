#pragma once

#include "tbpc/aspatial.hpp"
#include "tbpc/core.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace tbpc::greens {

enum class KernelMethod { GaussHermite, Adaptive, MonteCarlo };

/// How the heat-kernel integral (1/(2 sqrt(pi d t))) int e^{-(x-y)^2/4dt} f(y) dy is evaluated.
struct KernelEvaluator {
    KernelMethod method = KernelMethod::GaussHermite;
    std::size_t order = 64;       // GaussHermite
    double tolerance = 1e-10;     // Adaptive (relative)
    std::size_t samples = 100000; // MonteCarlo, >= 1000
    std::uint64_t seed = 2015;    // MonteCarlo

    static KernelEvaluator gauss_hermite(std::size_t order = 64);
    static KernelEvaluator adaptive(double tolerance = 1e-10);
    static KernelEvaluator monte_carlo(std::size_t samples, std::uint64_t seed);

    void validate() const;
};

struct Convolution {
    double value = 0.0;
    double std_error = 0.0;       // MonteCarlo only
    double error_estimate = 0.0;  // Adaptive only
};

/// Heat-kernel smoothing of p0 at (x,t).  Returns p0(x) at t = 0.  Monte Carlo
/// draws E[p0(x + sqrt(2dt) Z)] from a stream keyed by (seed, x, t, stream).
Convolution heat_convolve(const InitialProfile& profile, double d, double t, double x,
                          const KernelEvaluator& method = {}, std::uint64_t stream = 0);

/// Same for an arbitrary bounded function; `breakpoints` are points where f is
/// not smooth (used by the adaptive rule only).
Convolution heat_convolve(const std::function<double(double)>& f, double d, double t, double x,
                          const KernelEvaluator& method, std::uint64_t stream = 0,
                          const std::vector<double>& breakpoints = {});

/// Form of the unbounded global solution; see spectral::GlobalForm.
enum class GlobalForm { Exact, Printed };

/// p0 = far + jump * R(x) + q(x): far-field constant, a linear ramp R from 0 to 1
/// across the tabulated range, and a remainder q with an explicit transform.
class ProfileTransform {
public:
    explicit ProfileTransform(const InitialProfile& profile);

    double far_level() const { return far_; }
    double jump() const { return jump_; }
    /// C(w) = int q cos(w y) dy and S(w) = int q sin(w y) dy.
    std::pair<double, double> remainder(double omega) const;
    /// sin(w h)/(w h) for the ramp of half-width h centered at ramp_center().
    double ramp_kernel(double omega) const;
    double ramp_center() const { return center_; }
    /// Frequency beyond which |C|,|S| are negligible independent of t (inf when slow).
    double frequency_cutoff() const { return cutoff_; }
    bool has_remainder() const { return has_remainder_; }

private:
    InitialProfile profile_;
    double far_ = 0.0;
    double jump_ = 0.0;
    double center_ = 0.0;
    double half_width_ = 0.0;
    double cutoff_ = 0.0;
    bool has_remainder_ = false;
};

/// Globally optimal field on the real line.  Exact: Fourier superposition of the
/// per-frequency linear-quadratic solutions.  Printed: exp(Theta t)[H(p0,t); kappa H(p0,2T-t)].
class GlobalKernelSolution {
public:
    GlobalKernelSolution(const ModelParams& params, const InitialProfile& profile, GlobalForm form = GlobalForm::Exact,
                         const KernelEvaluator& method = {});

    double p(double x, double t) const;
    double u(double x, double t) const;
    SolutionField sample(const Grid& grid) const;

    double coupling() const { return kappa_; }

private:
    struct Spectrum {
        std::vector<double> omega, weight, cos_coeff, sin_coeff, ramp, growth, control;
        double g0 = 1.0, c0 = 0.0;
    };
    Spectrum spectrum(double t, double x_extent) const;
    std::pair<double, double> evaluate(const Spectrum& s, double x) const;

    ModelParams params_;
    InitialProfile profile_;
    GlobalForm form_;
    KernelEvaluator method_;
    ProfileTransform transform_;
    aspatial::RiccatiMode base_;
    double kappa_;
};

SolutionField local_solution_unbounded(const ModelParams& params, const InitialProfile& profile, const Grid& grid,
                                       const KernelEvaluator& method = {});

SolutionField global_solution_unbounded(const ModelParams& params, const InitialProfile& profile, const Grid& grid,
                                        const KernelEvaluator& method = {}, GlobalForm form = GlobalForm::Exact);

/// Local-type field for an arbitrary tax path: exp(int (eta - delta - eta tau)) H(p0, t).
SolutionField taxed_diffusion_unbounded(const ModelParams& params, const InitialProfile& profile, const Grid& grid,
                                        const std::function<double(double)>& tax, const KernelEvaluator& method,
                                        Provenance provenance);

}  // namespace tbpc::greens
