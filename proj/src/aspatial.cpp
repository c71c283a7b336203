#include "tbpc/aspatial.hpp"

#include "tbpc/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace tbpc::aspatial {

namespace {

double th(const ModelParams& p, double t) { return std::tanh(0.5 * xi(p) * (p.horizon - t)); }

void check_time(const ModelParams& p, double t) {
    if (!(t >= 0.0 && t <= p.horizon * (1.0 + 1e-12)))
        fail(ErrorCode::InvalidArgument, "time must lie in [0, T]");
}

}  // namespace

double tau_star(const ModelParams& params, double t) {
    check_time(params, t);
    const double x = xi(params);
    const double b = params.drift_gap();
    const double e = params.eta;
    const double q = params.theta;
    const double h = th(params, t);
    const double num = e * ((1.0 - q) * x - ((1.0 - q) * b - 2.0 * q) * h);
    const double den = q * x + (q * b + 2.0 * e * e * (1.0 - q)) * h;
    if (den == 0.0) fail(ErrorCode::DegenerateCoupling, "tax denominator vanishes");
    return num / den;
}

double tau_star_printed(const ModelParams& params, double t) {
    check_time(params, t);
    const double x = xi(params);
    const double b = params.drift_gap();
    const double e = params.eta;
    const double q = params.theta;
    const double h = th(params, t);
    const double num = e * ((1.0 - q) * x - ((1.0 - q) * b - 2.0 * q) * h);
    const double den = q * b + 2.0 * e * e * (1.0 - q) * h + q * x;
    return num / den;
}

ArctanhForm tau_star_arctanh(const ModelParams& params, double t) {
    check_time(params, t);
    const double x = xi(params);
    const double b = params.drift_gap();
    const double e = params.eta;
    const double q = params.theta;
    const double a = (2.0 * (1.0 - q) * e * e + q * b) / (q * x);
    if (!(a > -1.0 && a < 1.0)) return {};
    return {(-b + x * std::tanh(0.5 * x * (params.horizon - t) + std::atanh(a))) / (2.0 * e), true};
}

namespace {

double printed_denominator(const ModelParams& params) {
    const double x = xi(params);
    const double q = params.theta;
    const double e = params.eta;
    return std::exp(0.5 * params.rho * params.horizon) *
           (q * x + q * params.drift_gap() + 2.0 * e * e * (1.0 - q) * std::tanh(0.5 * x * params.horizon));
}

}  // namespace

double printed_u(const ModelParams& params, double p0, double t) {
    check_time(params, t);
    const double x = xi(params);
    const double q = params.theta;
    const double h = th(params, t);
    const double num = params.eta * ((1.0 - q) * x - ((1.0 - q) * params.drift_gap() - 2.0 * q) * h) * p0;
    return num / printed_denominator(params);
}

double printed_p(const ModelParams& params, double p0, double t) {
    check_time(params, t);
    const double x = xi(params);
    const double q = params.theta;
    const double e = params.eta;
    const double h = th(params, t);
    const double num = (q * params.drift_gap() + 2.0 * e * e * (1.0 - q) * h + q * x) * p0;
    return num / printed_denominator(params);
}

// ---------------------------------------------------------------------------
// With w = 2 eta tau + b the tax obeys w' = (w^2 - xi^2)/2, w(T) = b + 2 eta g.
// Writing s = xi(T-t)/2 and A = w(T)/xi:
//   w = xi [(1+A) - (1-A)e^{-2s}] / F(s),   F(s) = (1+A) + (1-A)e^{-2s}
//   p(t)/p(0) = exp((rho - xi)t/2) F(s_t)/F(s_0).

RiccatiMode::RiccatiMode(const ModelParams& params, double extra_decay)
    : eta_(params.eta), rho_(params.rho), horizon_(params.horizon) {
    params.validate();
    if (!(extra_decay >= 0.0) || !std::isfinite(extra_decay))
        fail(ErrorCode::InvalidArgument, "mode decay must be finite and >= 0");
    b_ = 2.0 * (params.delta + extra_decay - params.eta) + params.rho;
    xi_ = std::hypot(b_, 2.0 * params.eta);
    const double g = params.terminal_ratio();
    a_ = (b_ + 2.0 * params.eta * g) / xi_;
    const double f0 = F(0.5 * xi_ * horizon_);
    // F decreases from 2 toward 1+A; a vanishing F is a conjugate point.
    if (!(f0 > 1e-12 * (std::abs(1.0 + a_) + std::abs(1.0 - a_))))
        fail(ErrorCode::DegenerateCoupling, "terminal coupling is degenerate for these parameters");
    log_f0_ = std::log(f0);
}

double RiccatiMode::F(double s) const { return (1.0 + a_) + (1.0 - a_) * std::exp(-2.0 * s); }

double RiccatiMode::growth(double t) const {
    const double s = 0.5 * xi_ * (horizon_ - t);
    return std::exp(0.5 * (rho_ - xi_) * t + std::log(F(s)) - log_f0_);
}

double RiccatiMode::tax(double t) const {
    const double s = 0.5 * xi_ * (horizon_ - t);
    const double e = std::exp(-2.0 * s);
    const double w = xi_ * ((1.0 + a_) - (1.0 - a_) * e) / ((1.0 + a_) + (1.0 - a_) * e);
    return (w - b_) / (2.0 * eta_);
}

// ---------------------------------------------------------------------------

AspatialSolution solve_aspatial_bvp(const ModelParams& params, double p0) {
    params.validate();
    if (!(p0 > 0.0) || !std::isfinite(p0)) fail(ErrorCode::InvalidArgument, "p0 must be > 0");
    // Raises DegenerateCoupling when the matrix-exponential coupling is undefined.
    (void)terminal_coupling(params);
    AspatialSolution sol{params, p0, RiccatiMode(params), 0.0};
    sol.terminal_ratio_residual = std::abs(sol.u(params.horizon) / sol.p(params.horizon) - params.terminal_ratio());
    return sol;
}

double path_cost(const ModelParams& params, std::span<const double> p, std::span<const double> u) {
    if (p.size() != u.size() || p.size() < 3) fail(ErrorCode::InvalidArgument, "path_cost: need matching paths of >= 3 samples");
    const std::size_t n = p.size();
    const double h = params.horizon / static_cast<double>(n - 1);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = h * static_cast<double>(i);
        f[i] = 0.5 * (p[i] * p[i] + u[i] * u[i]) * std::exp(-params.rho * t);
    }
    const double running = numerics::simpson(f, h);
    const double terminal = params.terminal_weight() * 0.5 * p.back() * p.back() * std::exp(-params.rho * params.horizon);
    return running + terminal;
}

double aspatial_cost(const ModelParams& params, const AspatialSolution& sol, std::size_t nt) {
    nt = std::max<std::size_t>(nt, 201);
    std::vector<double> p(nt), u(nt);
    const double h = params.horizon / static_cast<double>(nt - 1);
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = std::min(h * static_cast<double>(i), params.horizon);
        p[i] = sol.p(t);
        u[i] = sol.u(t);
    }
    return path_cost(params, p, u);
}

std::vector<double> propagate_state(const ModelParams& params, double p0,
                                    const std::function<double(double)>& control, std::size_t nt) {
    if (nt < 2) fail(ErrorCode::InvalidArgument, "propagate_state: nt must be >= 2");
    const double h = params.horizon / static_cast<double>(nt - 1);
    const double a = params.eta - params.delta;
    auto f = [&](double t, double p) { return a * p - params.eta * control(t); };
    std::vector<double> out(nt);
    out[0] = p0;
    double p = p0;
    for (std::size_t i = 1; i < nt; ++i) {
        const double t = h * static_cast<double>(i - 1);
        const double k1 = f(t, p);
        const double k2 = f(t + 0.5 * h, p + 0.5 * h * k1);
        const double k3 = f(t + 0.5 * h, p + 0.5 * h * k2);
        const double k4 = f(t + h, p + h * k3);
        p += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        out[i] = p;
    }
    return out;
}

double integrating_factor(const ModelParams& params, double t, std::size_t panels) {
    check_time(params, t);
    if (t == 0.0) return 1.0;
    const double c = params.eta - params.delta;
    const double integral = numerics::simpson(
        [&](double s) { return c - params.eta * tau_star(params, std::min(s, params.horizon)); }, 0.0, t, panels);
    return std::exp(integral);
}

ClosedFormDiscrepancy closed_form_discrepancy(const ModelParams& params, std::size_t samples) {
    samples = std::max<std::size_t>(samples, 2);
    const AspatialSolution sol = solve_aspatial_bvp(params, 1.0);
    ClosedFormDiscrepancy d;
    d.drift_gap = params.drift_gap();
    double tax_scale = 0.0, tax_err = 0.0, p_scale = 0.0, p_err = 0.0, u_scale = 0.0, u_err = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = params.horizon * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double pp = printed_p(params, 1.0, t);
        const double pu = printed_u(params, 1.0, t);
        const double tau = sol.tau(t);
        tax_scale = std::max(tax_scale, std::abs(tau));
        tax_err = std::max(tax_err, std::abs(pu / pp - tau));
        p_scale = std::max(p_scale, std::abs(sol.p(t)));
        p_err = std::max(p_err, std::abs(pp - sol.p(t)));
        u_scale = std::max(u_scale, std::abs(sol.u(t)));
        u_err = std::max(u_err, std::abs(pu - sol.u(t)));
    }
    d.tax_gap = tax_scale > 0.0 ? tax_err / tax_scale : tax_err;
    d.path_gap = std::max(p_err / p_scale, u_scale > 0.0 ? u_err / u_scale : u_err);
    return d;
}

SolutionField aspatial_field(const ModelParams& params, const InitialProfile& profile, const Grid& grid) {
    params.validate();
    validate_grid(grid);
    const RiccatiMode mode(params);
    Field2D p(grid.nt(), grid.nx()), u(grid.nt(), grid.nx());
    double ref = 0.0;
    std::vector<double> p0(grid.nx());
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        p0[i] = profile(grid.positions[i]);
        ref = std::max(ref, p0[i]);
    }
    for (std::size_t n = 0; n < grid.nt(); ++n) {
        const double g = mode.growth(grid.times[n]);
        const double tau = mode.tax(grid.times[n]);
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            p(n, i) = p0[i] * g;
            u(n, i) = p(n, i) * tau;
        }
    }
    return make_solution_field(grid, std::move(p), std::move(u), Provenance::AspatialClosedForm, ref);
}

}  // namespace tbpc::aspatial
