#include "tbpc/spectral.hpp"

#include "tbpc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tbpc::spectral {

CosineSeries::CosineSeries(CosineBasis basis, double x_a, double length, std::vector<double> coeffs)
    : basis_(basis), x_a_(x_a), length_(length), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 2) fail(ErrorCode::InvalidArgument, "cosine series needs N >= 1");
    if (!(length_ > 0.0)) fail(ErrorCode::InvalidArgument, "cosine series needs a positive length");
}

double CosineSeries::wavenumber(std::size_t n) const {
    const double base = std::numbers::pi * static_cast<double>(n) / length_;
    return basis_ == CosineBasis::PaperEven ? 2.0 * base : base;
}

double CosineSeries::mode(std::size_t n, double x) const {
    if (n == 0) return 0.5;
    return std::cos(wavenumber(n) * (x - x_a_));
}

double CosineSeries::operator()(double x) const {
    double s = 0.0;
    for (std::size_t n = 0; n < coeffs_.size(); ++n) s += coeffs_[n] * mode(n, x);
    return s;
}

double CosineSeries::derivative(double x) const {
    double s = 0.0;
    for (std::size_t n = 1; n < coeffs_.size(); ++n) {
        const double k = wavenumber(n);
        s -= coeffs_[n] * k * std::sin(k * (x - x_a_));
    }
    return s;
}

CosineSeries cosine_coeffs(const InitialProfile& profile, const SpatialDomain& domain, CosineBasis basis,
                           std::size_t modes) {
    if (!domain.is_bounded()) fail(ErrorCode::InvalidArgument, "cosine_coeffs requires a bounded domain");
    if (modes < 1) fail(ErrorCode::InvalidArgument, "cosine_coeffs requires N >= 1");
    std::size_t nx = std::max<std::size_t>(801, 64 * modes + 1);
    if (nx % 2 == 0) ++nx;
    const double L = domain.length();
    const double h = L / static_cast<double>(nx - 1);
    std::vector<double> xs(nx), f(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        xs[i] = (i + 1 == nx) ? domain.hi : domain.lo + h * static_cast<double>(i);
        f[i] = profile(xs[i]);
    }
    const auto w = numerics::simpson_weights(nx, h);
    CosineSeries probe(basis, domain.lo, L, std::vector<double>(modes + 1, 0.0));
    std::vector<double> coeffs(modes + 1, 0.0);
    for (std::size_t n = 0; n <= modes; ++n) {
        const double k = probe.wavenumber(n);
        double s = 0.0;
        for (std::size_t i = 0; i < nx; ++i) s += w[i] * f[i] * std::cos(k * (xs[i] - domain.lo));
        coeffs[n] = 2.0 * s / L;
    }
    CosineSeries series(basis, domain.lo, L, std::move(coeffs));
    double err = 0.0;
    for (std::size_t i = 0; i < nx; ++i) err = std::max(err, std::abs(f[i] - series(xs[i])));
    series.reconstruction_error = err;
    return series;
}

// ---------------------------------------------------------------------------

HeatSeries::HeatSeries(const InitialProfile& profile, const SpatialDomain& domain, double diffusivity,
                       const SpectralOptions& options)
    : profile_(profile), series_(cosine_coeffs(profile, domain, options.basis, options.modes)), d_(diffusivity) {
    if (!(d_ >= 0.0)) fail(ErrorCode::InvalidArgument, "diffusivity must be >= 0");
}

double HeatSeries::operator()(double x, double t) const {
    if (t == 0.0 || d_ == 0.0) return profile_(x);
    const auto& a = series_.coeffs();
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double k = series_.wavenumber(n);
        s += a[n] * std::exp(-d_ * k * k * t) * series_.mode(n, x);
    }
    return s;
}

// ---------------------------------------------------------------------------

namespace {

double max_on(const InitialProfile& profile, const SpatialDomain& domain) {
    double m = 0.0;
    for (int i = 0; i <= 400; ++i) m = std::max(m, profile(domain.lo + domain.length() * i / 400.0));
    return m;
}

}  // namespace

TaxedDiffusion::TaxedDiffusion(const ModelParams& params, const SpatialDomain& domain, const InitialProfile& profile,
                               std::function<double(double)> tax, const SpectralOptions& options)
    : params_(params), heat_(profile, domain, params.diffusivity, options), tax_(std::move(tax)),
      reference_(max_on(profile, domain)) {
    params_.validate();
    if (!tax_) fail(ErrorCode::InvalidArgument, "tax path must be callable");
}

double TaxedDiffusion::factor(double t) const {
    if (t == 0.0) return 1.0;
    const double c = params_.eta - params_.delta;
    return std::exp(numerics::simpson([&](double s) { return c - params_.eta * tax_(s); }, 0.0, t, 256));
}

double TaxedDiffusion::p(double x, double t) const { return factor(t) * heat_(x, t); }
double TaxedDiffusion::u(double x, double t) const { return tax_(t) * p(x, t); }

SolutionField TaxedDiffusion::sample(const Grid& grid, Provenance provenance) const {
    validate_grid(grid);
    Field2D p(grid.nt(), grid.nx()), u(grid.nt(), grid.nx());
    const double c = params_.eta - params_.delta;
    double log_factor = 0.0;
    for (std::size_t n = 0; n < grid.nt(); ++n) {
        const double t = grid.times[n];
        if (n > 0) {
            log_factor += numerics::simpson([&](double s) { return c - params_.eta * tax_(s); }, grid.times[n - 1],
                                            t, 16);
        }
        const double f = std::exp(log_factor);
        const double tau = tax_(t);
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            p(n, i) = f * heat_(grid.positions[i], t);
            u(n, i) = tau * p(n, i);
        }
    }
    return make_solution_field(grid, std::move(p), std::move(u), provenance, reference_);
}

// ---------------------------------------------------------------------------

GlobalSpectralSolution::GlobalSpectralSolution(const ModelParams& params, const SpatialDomain& domain,
                                               const InitialProfile& profile, const SpectralOptions& options)
    : params_(params), profile_(profile), options_(options),
      series_(cosine_coeffs(profile, domain, options.basis, options.modes)), kappa_(terminal_coupling(params)),
      reference_(max_on(profile, domain)) {
    params_.validate();
    modes_.reserve(series_.coeffs().size());
    for (std::size_t n = 0; n < series_.coeffs().size(); ++n) {
        const double k = series_.wavenumber(n);
        modes_.emplace_back(params_, params_.diffusivity * k * k);
    }
}

std::vector<double> GlobalSpectralSolution::printed_b_coefficients() const {
    const auto& a = series_.coeffs();
    std::vector<double> b(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double k = series_.wavenumber(n);
        b[n] = kappa_ * a[n] * std::exp(-params_.diffusivity * k * k * params_.horizon);
    }
    return b;
}

std::pair<double, double> GlobalSpectralSolution::evaluate(double x, double t) const {
    const auto& a = series_.coeffs();
    const double d = params_.diffusivity;
    if (options_.form == GlobalForm::Exact) {
        double p = 0.0, u = 0.0;
        for (std::size_t n = 0; n < a.size(); ++n) {
            const double m = a[n] * series_.mode(n, x);
            const double g = modes_[n].growth(t);
            p += m * g;
            u += m * g * modes_[n].tax(t);
        }
        if (t == 0.0) p = profile_(x);
        return {p, u};
    }
    const auto b = printed_b_coefficients();
    double fa = 0.0, fb = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double k = series_.wavenumber(n);
        const double m = series_.mode(n, x);
        fa += a[n] * std::exp(-d * k * k * t) * m;
        fb += b[n] * std::exp(-d * k * k * (params_.horizon - t)) * m;
    }
    if (t == 0.0 || d == 0.0) fa = profile_(x);
    const MatExp2 e = theta_exp(params_, t);
    return {e.e11 * fa + e.e12 * fb, e.e21 * fa + e.e22 * fb};
}

double GlobalSpectralSolution::p(double x, double t) const { return evaluate(x, t).first; }
double GlobalSpectralSolution::u(double x, double t) const { return evaluate(x, t).second; }

SolutionField GlobalSpectralSolution::sample(const Grid& grid) const {
    validate_grid(grid);
    const auto& a = series_.coeffs();
    const std::size_t nm = a.size();
    std::vector<double> basis(nm * grid.nx());
    for (std::size_t n = 0; n < nm; ++n)
        for (std::size_t i = 0; i < grid.nx(); ++i) basis[n * grid.nx() + i] = a[n] * series_.mode(n, grid.positions[i]);

    Field2D p(grid.nt(), grid.nx()), u(grid.nt(), grid.nx());
    std::vector<double> cp(nm), cu(nm);
    const auto b = printed_b_coefficients();
    const double d = params_.diffusivity;
    for (std::size_t it = 0; it < grid.nt(); ++it) {
        const double t = grid.times[it];
        std::fill(cp.begin(), cp.end(), 0.0);
        std::fill(cu.begin(), cu.end(), 0.0);
        MatExp2 e;
        if (options_.form == GlobalForm::Exact) {
            for (std::size_t n = 0; n < nm; ++n) {
                cp[n] = modes_[n].growth(t);
                cu[n] = cp[n] * modes_[n].tax(t);
            }
        } else {
            // cp carries the A-series decay, cu the B-series decay relative to A_n.
            e = theta_exp(params_, t);
            for (std::size_t n = 0; n < nm; ++n) {
                const double k = series_.wavenumber(n);
                cp[n] = std::exp(-d * k * k * t);
                cu[n] = a[n] != 0.0 ? b[n] / a[n] * std::exp(-d * k * k * (params_.horizon - t)) : 0.0;
            }
        }
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            double sp = 0.0, su = 0.0;
            for (std::size_t n = 0; n < nm; ++n) {
                sp += cp[n] * basis[n * grid.nx() + i];
                su += cu[n] * basis[n * grid.nx() + i];
            }
            const double x = grid.positions[i];
            if (options_.form == GlobalForm::Exact) {
                p(it, i) = t == 0.0 ? profile_(x) : sp;
                u(it, i) = su;
            } else {
                if (t == 0.0 || d == 0.0) sp = profile_(x);
                p(it, i) = e.e11 * sp + e.e12 * su;
                u(it, i) = e.e21 * sp + e.e22 * su;
            }
        }
    }
    return make_solution_field(grid, std::move(p), std::move(u), Provenance::SpectralGlobal, reference_);
}

// ---------------------------------------------------------------------------

SolutionField local_solution_bounded(const ModelParams& params, const SpatialDomain& domain,
                                     const InitialProfile& profile, const Grid& grid, const SpectralOptions& options) {
    if (!domain.is_bounded()) fail(ErrorCode::InvalidArgument, "local_solution_bounded requires a bounded domain");
    const TaxedDiffusion local(params, domain, profile, [params](double t) { return aspatial::tau_star(params, t); },
                               options);
    return local.sample(grid, Provenance::SpectralLocal);
}

SolutionField global_solution_bounded(const ModelParams& params, const SpatialDomain& domain,
                                      const InitialProfile& profile, const Grid& grid, const SpectralOptions& options) {
    if (!domain.is_bounded()) fail(ErrorCode::InvalidArgument, "global_solution_bounded requires a bounded domain");
    return GlobalSpectralSolution(params, domain, profile, options).sample(grid);
}

}  // namespace tbpc::spectral
