#pragma once

#include "tbpc/aspatial.hpp"
#include "tbpc/core.hpp"

#include <functional>
#include <vector>

namespace tbpc::spectral {

/// PaperEven: cos(2n pi (x-x_a)/L), only midpoint-symmetric profiles.
/// FullNeumann: cos(n pi (x-x_a)/L), complete Neumann basis.
enum class CosineBasis { PaperEven, FullNeumann };

/// Exact: each mode solves its own linear-quadratic problem (decay delta + d k^2).
/// Printed: exp(Theta t)[A-series(t); B-series(T-t)] as typeset; diagnostics only.
enum class GlobalForm { Exact, Printed };

/// A0/2 + sum_{n=1..N} A_n cos(k_n (x - x_a)).
class CosineSeries {
public:
    CosineSeries(CosineBasis basis, double x_a, double length, std::vector<double> coeffs);

    CosineBasis basis() const { return basis_; }
    std::size_t truncation() const { return coeffs_.size() - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double x_a() const { return x_a_; }
    double length() const { return length_; }

    double wavenumber(std::size_t n) const;
    /// Mode n including the 1/2 weight on n = 0.
    double mode(std::size_t n, double x) const;
    double operator()(double x) const;
    double derivative(double x) const;

    /// sup |p0 - series| on the quadrature samples (filled in by cosine_coeffs).
    double reconstruction_error = 0.0;

private:
    CosineBasis basis_;
    double x_a_;
    double length_;
    std::vector<double> coeffs_;
};

/// Fourier-cosine coefficients by composite Simpson on max(801, 64N+1) samples.
CosineSeries cosine_coeffs(const InitialProfile& profile, const SpatialDomain& domain, CosineBasis basis,
                           std::size_t modes);

struct SpectralOptions {
    CosineBasis basis = CosineBasis::FullNeumann;
    std::size_t modes = 64;
    GlobalForm form = GlobalForm::Exact;
};

/// Neumann heat semigroup applied to p0: h(x,t) = A0/2 + sum A_n e^{-d k_n^2 t} cos(...).
/// Returns p0 itself at t = 0 or d = 0.
class HeatSeries {
public:
    HeatSeries(const InitialProfile& profile, const SpatialDomain& domain, double diffusivity,
               const SpectralOptions& options = {});

    double operator()(double x, double t) const;
    const CosineSeries& series() const { return series_; }

private:
    InitialProfile profile_;
    CosineSeries series_;
    double d_;
};

/// p(x,t) = exp(int_0^t (eta - delta - eta tau_s) ds) h(x,t), u = tau_t p for a given tax path.
class TaxedDiffusion {
public:
    TaxedDiffusion(const ModelParams& params, const SpatialDomain& domain, const InitialProfile& profile,
                   std::function<double(double)> tax, const SpectralOptions& options = {});

    double factor(double t) const;
    double p(double x, double t) const;
    double u(double x, double t) const;
    double tau(double t) const { return tax_(t); }

    SolutionField sample(const Grid& grid, Provenance provenance) const;

private:
    ModelParams params_;
    HeatSeries heat_;
    std::function<double(double)> tax_;
    double reference_;
};

class GlobalSpectralSolution {
public:
    GlobalSpectralSolution(const ModelParams& params, const SpatialDomain& domain, const InitialProfile& profile,
                           const SpectralOptions& options = {});

    double p(double x, double t) const;
    double u(double x, double t) const;

    double coupling() const { return kappa_; }
    const CosineSeries& series() const { return series_; }
    /// B_0 = kappa A_0, B_n = kappa A_n e^{-d k_n^2 T}.
    std::vector<double> printed_b_coefficients() const;

    SolutionField sample(const Grid& grid) const;

private:
    std::pair<double, double> evaluate(double x, double t) const;

    ModelParams params_;
    InitialProfile profile_;
    SpectralOptions options_;
    CosineSeries series_;
    std::vector<aspatial::RiccatiMode> modes_;
    double kappa_;
    double reference_;
};

SolutionField local_solution_bounded(const ModelParams& params, const SpatialDomain& domain,
                                     const InitialProfile& profile, const Grid& grid,
                                     const SpectralOptions& options = {});

SolutionField global_solution_bounded(const ModelParams& params, const SpatialDomain& domain,
                                      const InitialProfile& profile, const Grid& grid,
                                      const SpectralOptions& options = {});

}  // namespace tbpc::spectral
