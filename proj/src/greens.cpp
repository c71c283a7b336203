#include "tbpc/greens.hpp"

#include "tbpc/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace tbpc::greens {

KernelEvaluator KernelEvaluator::gauss_hermite(std::size_t order) {
    KernelEvaluator k;
    k.method = KernelMethod::GaussHermite;
    k.order = order;
    k.validate();
    return k;
}

KernelEvaluator KernelEvaluator::adaptive(double tolerance) {
    KernelEvaluator k;
    k.method = KernelMethod::Adaptive;
    k.tolerance = tolerance;
    k.validate();
    return k;
}

KernelEvaluator KernelEvaluator::monte_carlo(std::size_t samples, std::uint64_t seed) {
    KernelEvaluator k;
    k.method = KernelMethod::MonteCarlo;
    k.samples = samples;
    k.seed = seed;
    k.validate();
    return k;
}

void KernelEvaluator::validate() const {
    switch (method) {
        case KernelMethod::GaussHermite:
            if (order < 2 || order > 400) fail(ErrorCode::InvalidArgument, "Gauss-Hermite order must be in [2, 400]");
            break;
        case KernelMethod::Adaptive:
            if (!(tolerance > 0.0 && tolerance < 1.0)) fail(ErrorCode::InvalidArgument, "adaptive tolerance must be in (0,1)");
            break;
        case KernelMethod::MonteCarlo:
            if (samples < 1000) fail(ErrorCode::InvalidArgument, "Monte Carlo needs at least 1000 samples");
            break;
    }
}

// ---------------------------------------------------------------------------

Convolution heat_convolve(const std::function<double(double)>& f, double d, double t, double x,
                          const KernelEvaluator& method, std::uint64_t stream, const std::vector<double>& breakpoints) {
    method.validate();
    if (!(d >= 0.0) || !(t >= 0.0)) fail(ErrorCode::InvalidArgument, "heat_convolve needs d >= 0 and t >= 0");
    if (t == 0.0 || d == 0.0) return {f(x), 0.0, 0.0};
    const double scale = 2.0 * std::sqrt(d * t);  // y = x + scale * s, weight e^{-s^2}/sqrt(pi)
    Convolution out;
    switch (method.method) {
        case KernelMethod::GaussHermite: {
            const auto& rule = numerics::gauss_hermite(method.order);
            double s = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(x + scale * rule.nodes[i]);
            out.value = s / std::sqrt(std::numbers::pi);
            break;
        }
        case KernelMethod::Adaptive: {
            std::vector<double> cuts{-40.0, -8.0, 8.0, 40.0};
            for (double b : breakpoints) {
                const double s = (b - x) / scale;
                if (s > -40.0 && s < 40.0) cuts.push_back(s);
            }
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            auto g = [&](double s) { return std::exp(-s * s) * f(x + scale * s); };
            double total = 0.0, err = 0.0, l1 = 0.0;
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                double e = 0.0, a1 = 0.0;
                total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, cuts[k], cuts[k + 1], 15,
                                                                                      method.tolerance, &e, &a1);
                err += e;
                l1 += a1;
            }
            if (err > method.tolerance * std::max(l1, std::numeric_limits<double>::min()))
                fail(ErrorCode::Quadrature, "adaptive kernel quadrature did not converge; achieved relative error " +
                                                std::to_string(err / std::max(l1, std::numeric_limits<double>::min())));
            out.value = total / std::sqrt(std::numbers::pi);
            out.error_estimate = err / std::sqrt(std::numbers::pi);
            break;
        }
        case KernelMethod::MonteCarlo: {
            using numerics::CounterRng;
            const std::uint64_t key =
                CounterRng::mix(std::bit_cast<std::uint64_t>(x) ^ CounterRng::mix(std::bit_cast<std::uint64_t>(t) + stream));
            const CounterRng rng(method.seed, key);
            const double sigma = std::sqrt(2.0 * d * t);
            // Welford accumulation.
            double mean = 0.0, m2 = 0.0;
            for (std::size_t i = 0; i < method.samples; ++i) {
                const double v = f(x + sigma * rng.normal(i));
                const double delta = v - mean;
                mean += delta / static_cast<double>(i + 1);
                m2 += delta * (v - mean);
            }
            const double n = static_cast<double>(method.samples);
            out.value = mean;
            out.std_error = std::sqrt(m2 / (n - 1.0) / n);
            break;
        }
    }
    return out;
}

Convolution heat_convolve(const InitialProfile& profile, double d, double t, double x, const KernelEvaluator& method,
                          std::uint64_t stream) {
    return heat_convolve([&](double y) { return profile(y); }, d, t, x, method, stream, profile.kinks());
}

// ---------------------------------------------------------------------------

namespace {

const numerics::QuadratureRule& unit_legendre() {
    static const numerics::QuadratureRule rule = numerics::gauss_legendre_panels(0.0, 1.0, 1.0);
    return rule;
}

}  // namespace

ProfileTransform::ProfileTransform(const InitialProfile& profile) : profile_(profile) {
    const auto& form = profile.form();
    if (const auto* c = std::get_if<InitialProfile::Constant>(&form)) {
        far_ = c->level;
        cutoff_ = 0.0;
    } else if (const auto* b = std::get_if<InitialProfile::CenteredBump>(&form)) {
        far_ = 0.75 * b->level;
        has_remainder_ = true;
        cutoff_ = 14.0;  // 0.5 p0 sqrt(pi) e^{-w^2/4} < 1e-21 p0 beyond
    } else {
        const auto& t = std::get<InitialProfile::Tabulated>(form);
        far_ = t.values.front();
        jump_ = t.values.back() - t.values.front();
        center_ = 0.5 * (t.positions.front() + t.positions.back());
        half_width_ = 0.5 * (t.positions.back() - t.positions.front());
        has_remainder_ = !profile.is_homogeneous();
        cutoff_ = has_remainder_ ? std::numeric_limits<double>::infinity() : 0.0;
    }
}

double ProfileTransform::ramp_kernel(double omega) const {
    const double z = omega * half_width_;
    if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

std::pair<double, double> ProfileTransform::remainder(double omega) const {
    const auto& form = profile_.form();
    if (const auto* b = std::get_if<InitialProfile::CenteredBump>(&form))
        return {0.5 * b->level * std::sqrt(std::numbers::pi) * std::exp(-0.25 * omega * omega), 0.0};
    const auto* t = std::get_if<InitialProfile::Tabulated>(&form);
    if (t == nullptr || !has_remainder_) return {0.0, 0.0};
    const auto& ys = t->positions;
    auto q = [&](std::size_t j) {
        const double r = half_width_ > 0.0 ? (ys[j] - ys.front()) / (2.0 * half_width_) : 0.0;
        return t->values[j] - far_ - jump_ * r;
    };
    // Integral of q e^{-i w y}; q is linear on each segment.
    std::complex<double> total{0.0, 0.0};
    const auto& rule = unit_legendre();
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
        const double a = ys[j], b = ys[j + 1], qa = q(j), qb = q(j + 1);
        const double w = b - a;
        if (std::abs(omega) * w < 0.5) {
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double s = rule.nodes[k];
                const double y = a + w * s;
                const double v = qa + (qb - qa) * s;
                total += rule.weights[k] * w * v * std::polar(1.0, -omega * y);
            }
        } else {
            const std::complex<double> i{0.0, 1.0};
            const auto ea = std::polar(1.0, -omega * a), eb = std::polar(1.0, -omega * b);
            const double beta = (qb - qa) / w;
            total += i * (qb * eb - qa * ea) / omega + beta * (eb - ea) / (omega * omega);
        }
    }
    return {total.real(), -total.imag()};
}

// ---------------------------------------------------------------------------

GlobalKernelSolution::GlobalKernelSolution(const ModelParams& params, const InitialProfile& profile, GlobalForm form,
                                           const KernelEvaluator& method)
    : params_(params), profile_(profile), form_(form), method_(method), transform_(profile), base_(params),
      kappa_(terminal_coupling(params)) {
    params_.validate();
    method_.validate();
}

GlobalKernelSolution::Spectrum GlobalKernelSolution::spectrum(double t, double x_extent) const {
    Spectrum s;
    s.g0 = base_.growth(t);
    s.c0 = s.g0 * base_.tax(t);
    const bool oscillatory = transform_.has_remainder() || transform_.jump() != 0.0;
    if (!oscillatory || params_.diffusivity == 0.0) return s;
    const double d = params_.diffusivity;
    // At t = 0 only the control needs the spectrum; its modes decay like 1/(d w^2).
    double omega_max = t > 0.0 ? std::sqrt(46.0 / (d * t)) : 200.0 / std::sqrt(d);
    omega_max = std::max(1.0, std::min(omega_max, transform_.jump() != 0.0 ? omega_max : transform_.frequency_cutoff()));
    const double width = std::min(1.0, 6.0 / (x_extent + 1.0));
    const auto rule = numerics::gauss_legendre_panels(0.0, omega_max, width);
    const std::size_t n = rule.nodes.size();
    s.omega = rule.nodes;
    s.weight = rule.weights;
    s.cos_coeff.resize(n);
    s.sin_coeff.resize(n);
    s.ramp.resize(n);
    s.growth.resize(n);
    s.control.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double w = rule.nodes[j];
        const auto [c, sn] = transform_.remainder(w);
        s.cos_coeff[j] = c;
        s.sin_coeff[j] = sn;
        s.ramp[j] = transform_.jump() * transform_.ramp_kernel(w);
        const aspatial::RiccatiMode mode(params_, d * w * w);
        s.growth[j] = mode.growth(t);
        s.control[j] = s.growth[j] * mode.tax(t);
    }
    return s;
}

std::pair<double, double> GlobalKernelSolution::evaluate(const Spectrum& s, double x) const {
    const double k0 = transform_.far_level() + 0.5 * transform_.jump();
    double p = k0 * s.g0, u = k0 * s.c0;
    const double m = transform_.ramp_center();
    double sp = 0.0, su = 0.0;
    for (std::size_t j = 0; j < s.omega.size(); ++j) {
        const double w = s.omega[j];
        double v = s.cos_coeff[j] * std::cos(w * x) + s.sin_coeff[j] * std::sin(w * x);
        if (s.ramp[j] != 0.0) v += s.ramp[j] * std::sin(w * (x - m)) / w;
        sp += s.weight[j] * v * s.growth[j];
        su += s.weight[j] * v * s.control[j];
    }
    p += sp / std::numbers::pi;
    u += su / std::numbers::pi;
    return {p, u};
}

double GlobalKernelSolution::p(double x, double t) const {
    if (form_ == GlobalForm::Printed) {
        const double h1 = heat_convolve(profile_, params_.diffusivity, t, x, method_).value;
        const double h2 = heat_convolve(profile_, params_.diffusivity, 2.0 * params_.horizon - t, x, method_).value;
        const MatExp2 e = theta_exp(params_, t);
        return e.e11 * h1 + e.e12 * kappa_ * h2;
    }
    if (t == 0.0) return profile_(x);
    if (params_.diffusivity == 0.0) return profile_(x) * base_.growth(t);
    return evaluate(spectrum(t, std::abs(x)), x).first;
}

double GlobalKernelSolution::u(double x, double t) const {
    if (form_ == GlobalForm::Printed) {
        const double h1 = heat_convolve(profile_, params_.diffusivity, t, x, method_).value;
        const double h2 = heat_convolve(profile_, params_.diffusivity, 2.0 * params_.horizon - t, x, method_).value;
        const MatExp2 e = theta_exp(params_, t);
        return e.e21 * h1 + e.e22 * kappa_ * h2;
    }
    if (params_.diffusivity == 0.0) return profile_(x) * base_.growth(t) * base_.tax(t);
    return evaluate(spectrum(t, std::abs(x)), x).second;
}

SolutionField GlobalKernelSolution::sample(const Grid& grid) const {
    validate_grid(grid);
    Field2D p(grid.nt(), grid.nx()), u(grid.nt(), grid.nx());
    const double extent = std::max(std::abs(grid.positions.front()), std::abs(grid.positions.back()));
    double ref = 0.0;
    for (double x : grid.positions) ref = std::max(ref, profile_(x));
    for (std::size_t n = 0; n < grid.nt(); ++n) {
        const double t = grid.times[n];
        if (form_ == GlobalForm::Printed) {
            const MatExp2 e = theta_exp(params_, t);
            for (std::size_t i = 0; i < grid.nx(); ++i) {
                const double x = grid.positions[i];
                const double h1 = heat_convolve(profile_, params_.diffusivity, t, x, method_, i).value;
                const double h2 =
                    heat_convolve(profile_, params_.diffusivity, 2.0 * params_.horizon - t, x, method_, i).value;
                p(n, i) = e.e11 * h1 + e.e12 * kappa_ * h2;
                u(n, i) = e.e21 * h1 + e.e22 * kappa_ * h2;
            }
            continue;
        }
        const Spectrum s = spectrum(t, extent);
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const double x = grid.positions[i];
            if (params_.diffusivity == 0.0) {
                p(n, i) = profile_(x) * s.g0;
                u(n, i) = profile_(x) * s.c0;
                continue;
            }
            const auto [pv, uv] = evaluate(s, x);
            p(n, i) = t == 0.0 ? profile_(x) : pv;
            u(n, i) = uv;
        }
    }
    return make_solution_field(grid, std::move(p), std::move(u), Provenance::GreensGlobal, ref);
}

// ---------------------------------------------------------------------------

SolutionField taxed_diffusion_unbounded(const ModelParams& params, const InitialProfile& profile, const Grid& grid,
                                        const std::function<double(double)>& tax, const KernelEvaluator& method,
                                        Provenance provenance) {
    params.validate();
    method.validate();
    validate_grid(grid);
    Field2D p(grid.nt(), grid.nx()), u(grid.nt(), grid.nx());
    const double c = params.eta - params.delta;
    double log_factor = 0.0, ref = 0.0;
    for (double x : grid.positions) ref = std::max(ref, profile(x));
    for (std::size_t n = 0; n < grid.nt(); ++n) {
        const double t = grid.times[n];
        if (n > 0)
            log_factor += numerics::simpson([&](double s) { return c - params.eta * tax(s); }, grid.times[n - 1], t, 16);
        const double f = std::exp(log_factor);
        const double tau = tax(t);
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const double h = heat_convolve(profile, params.diffusivity, t, grid.positions[i], method, i).value;
            p(n, i) = f * h;
            u(n, i) = tau * p(n, i);
        }
    }
    return make_solution_field(grid, std::move(p), std::move(u), provenance, ref);
}

SolutionField local_solution_unbounded(const ModelParams& params, const InitialProfile& profile, const Grid& grid,
                                       const KernelEvaluator& method) {
    return taxed_diffusion_unbounded(
        params, profile, grid, [&params](double t) { return aspatial::tau_star(params, t); }, method,
        Provenance::GreensLocal);
}

SolutionField global_solution_unbounded(const ModelParams& params, const InitialProfile& profile, const Grid& grid,
                                        const KernelEvaluator& method, GlobalForm form) {
    return GlobalKernelSolution(params, profile, form, method).sample(grid);
}

}  // namespace tbpc::greens
