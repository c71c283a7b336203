#include "tbpc/analysis.hpp"

#include "tbpc/aspatial.hpp"
#include "tbpc/greens.hpp"
#include "tbpc/numerics.hpp"
#include "tbpc/pde_oracle.hpp"
#include "tbpc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <sstream>

namespace tbpc::analysis {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double sup_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

CostBreakdown spatial_cost(const ModelParams& params, const SolutionField& field) {
    const Grid& g = field.grid;
    const auto wx = numerics::simpson_weights(g.nx(), g.dx());
    const auto wt = numerics::simpson_weights(g.nt(), g.dt());
    CostBreakdown c;
    for (std::size_t n = 0; n < g.nt(); ++n) {
        double row = 0.0;
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double p = field.p(n, i), u = field.u(n, i);
            row += wx[i] * 0.5 * (p * p + u * u);
        }
        c.running += wt[n] * row * std::exp(-params.rho * g.times[n]);
    }
    double last = 0.0;
    const std::size_t nT = g.nt() - 1;
    for (std::size_t i = 0; i < g.nx(); ++i) last += wx[i] * 0.5 * field.p(nT, i) * field.p(nT, i);
    c.terminal = params.terminal_weight() * last * std::exp(-params.rho * g.times[nT]);
    c.total = c.running + c.terminal;
    return c;
}

double cost_gap(const ModelParams& params, const SolutionField& a, const SolutionField& b) {
    return spatial_cost(params, a).total - spatial_cost(params, b).total;
}

double relative_gap(const SolutionField& a, const SolutionField& b, bool include_control) {
    if (a.p.nt() != b.p.nt() || a.p.nx() != b.p.nx()) fail(ErrorCode::InvalidArgument, "fields live on different grids");
    double dp = 0.0, du = 0.0;
    for (std::size_t k = 0; k < a.p.values().size(); ++k) {
        dp = std::max(dp, std::abs(a.p.values()[k] - b.p.values()[k]));
        du = std::max(du, std::abs(a.u.values()[k] - b.u.values()[k]));
    }
    const double sp = sup_abs(b.p.values()), su = sup_abs(b.u.values());
    double gap = sp > 0.0 ? dp / sp : dp;
    if (include_control) gap = std::max(gap, su > 0.0 ? du / su : du);
    return gap;
}

std::vector<double> aggregate_pollution(const SolutionField& field, SpatialRule rule) {
    const Grid& g = field.grid;
    const auto w = rule == SpatialRule::Simpson ? numerics::simpson_weights(g.nx(), g.dx())
                                                : numerics::trapezoid_weights(g.nx(), g.dx());
    std::vector<double> tot(g.nt(), 0.0);
    for (std::size_t n = 0; n < g.nt(); ++n)
        for (std::size_t i = 0; i < g.nx(); ++i) tot[n] += w[i] * field.p(n, i);
    return tot;
}

double tau_min(const SolutionField& field) {
    double ref = 0.0;
    for (std::size_t i = 0; i < field.p.nx(); ++i) ref = std::max(ref, field.p(0, i));
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < field.p.nt(); ++n)
        for (std::size_t i = 0; i < field.p.nx(); ++i)
            if (field.p(n, i) > 1e-12 * ref && field.has_tax(n, i)) m = std::min(m, field.tau(n, i));
    return m;
}

std::string PropositionReport::to_line() const {
    std::ostringstream os;
    os << name << ' ' << (!asserted ? "report-only" : (holds ? "holds" : "fails")) << " margin=" << fmt(margin)
       << " tol=" << fmt(tolerance);
    if (!details.empty()) os << ' ' << details;
    return os.str();
}

// ---------------------------------------------------------------------------

double global_foc_residual(const ModelParams& params, const PointField& p, const PointField& u,
                           const std::vector<double>& xs, const std::vector<double>& ts, double hx, double ht) {
    const double d = params.diffusivity;
    const double a = params.eta - params.delta;
    auto d1 = [](double fm2, double fm1, double fp1, double fp2, double h) {
        return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    };
    auto d2 = [](double fm2, double fm1, double f0, double fp1, double fp2, double h) {
        return (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    };
    double worst = 0.0, scale = 0.0;
    for (double t : ts) {
        for (double x : xs) {
            const double p0 = p(x, t), u0 = u(x, t);
            scale = std::max(scale, std::abs(p0));
            const double pt = d1(p(x, t - 2 * ht), p(x, t - ht), p(x, t + ht), p(x, t + 2 * ht), ht);
            const double ut = d1(u(x, t - 2 * ht), u(x, t - ht), u(x, t + ht), u(x, t + 2 * ht), ht);
            const double pxx = d2(p(x - 2 * hx, t), p(x - hx, t), p0, p(x + hx, t), p(x + 2 * hx, t), hx);
            const double uxx = d2(u(x - 2 * hx, t), u(x - hx, t), u0, u(x + hx, t), u(x + 2 * hx, t), hx);
            const double rp = pt - (d * pxx + a * p0 - params.eta * u0);
            const double ru = ut - (params.rho * u0 - d * uxx - params.eta * p0 - a * u0);
            worst = std::max({worst, std::abs(rp), std::abs(ru)});
        }
    }
    return scale > 0.0 ? worst / scale : worst;
}

namespace {

struct PointSolutions {
    PointField local_p, local_u, global_p, global_u;
};

/// Evaluation points for residual checks: interior of the domain, away from t = 0 and T.
void residual_samples(const SpatialDomain& domain, double T, std::vector<double>& xs, std::vector<double>& ts,
                      double& hx, double& ht) {
    xs.clear();
    ts.clear();
    const double lo = domain.lo, len = domain.length();
    for (int i = 1; i <= 9; ++i) xs.push_back(lo + len * (0.1 + 0.08 * (i - 1)));
    for (int k = 1; k <= 5; ++k) ts.push_back(T * (0.1 + 0.2 * (k - 1)));
    hx = len / 200.0;
    ht = T / 400.0;
}

}  // namespace

PropositionReport check_local_equals_global(const ModelParams& params, const SpatialDomain& domain,
                                            const InitialProfile& profile, const LocalGlobalOptions& options) {
    params.validate();
    const Grid grid = make_grid(domain, params, options.nx, options.nt);
    spectral::SpectralOptions so;
    so.modes = options.modes;
    SolutionField local, global;
    PointField lp, lu, gp, gu;
    std::shared_ptr<spectral::TaxedDiffusion> bl;
    std::shared_ptr<spectral::GlobalSpectralSolution> bg;
    std::shared_ptr<greens::GlobalKernelSolution> ug;
    const auto tau = [params](double t) { return aspatial::tau_star(params, std::clamp(t, 0.0, params.horizon)); };
    if (domain.is_bounded()) {
        bl = std::make_shared<spectral::TaxedDiffusion>(params, domain, profile, tau, so);
        bg = std::make_shared<spectral::GlobalSpectralSolution>(params, domain, profile, so);
        local = bl->sample(grid, Provenance::SpectralLocal);
        global = bg->sample(grid);
        lp = [bl](double x, double t) { return bl->p(x, t); };
        lu = [bl](double x, double t) { return bl->u(x, t); };
        gp = [bg](double x, double t) { return bg->p(x, t); };
        gu = [bg](double x, double t) { return bg->u(x, t); };
    } else {
        local = greens::local_solution_unbounded(params, profile, grid);
        ug = std::make_shared<greens::GlobalKernelSolution>(params, profile);
        global = ug->sample(grid);
        const double d = params.diffusivity;
        lp = [=](double x, double t) {
            return aspatial::integrating_factor(params, t) * greens::heat_convolve(profile, d, t, x).value;
        };
        lu = [=](double x, double t) { return tau(t) * lp(x, t); };
        gp = [ug](double x, double t) { return ug->p(x, t); };
        gu = [ug](double x, double t) { return ug->u(x, t); };
    }
    PropositionReport r;
    r.name = "local_equals_global";
    r.tolerance = 1e-6;
    const double gap = relative_gap(local, global);
    r.margin = -gap;
    r.holds = r.margin >= -r.tolerance;

    std::vector<double> xs, ts;
    double hx = 0.0, ht = 0.0;
    residual_samples(domain, params.horizon, xs, ts, hx, ht);
    const double local_residual = global_foc_residual(params, lp, lu, xs, ts, hx, ht);
    const double global_residual = global_foc_residual(params, gp, gu, xs, ts, hx, ht);
    const CostBreakdown cl = spatial_cost(params, local), cg = spatial_cost(params, global);
    std::ostringstream os;
    os << "sup_gap=" << fmt(gap) << " homogeneous=" << (profile.is_homogeneous() ? "yes" : "no")
       << " local_foc_residual=" << fmt(local_residual) << " global_foc_residual=" << fmt(global_residual)
       << " cost_local=" << fmt(cl.total) << " cost_global=" << fmt(cg.total)
       << " cost_gap=" << fmt(cl.total - cg.total);
    r.details = os.str();
    return r;
}

PropositionReport check_aggregate_decay(const ModelParams& params, const SolutionField& field) {
    PropositionReport r;
    r.name = "aggregate_decay";
    r.tolerance = 1e-8;
    const double tmin = tau_min(field);
    const double threshold = params.tax_threshold();
    const auto tot = aggregate_pollution(field, SpatialRule::Simpson);
    const auto trap = aggregate_pollution(field, SpatialRule::Trapezoid);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t n = 1; n < tot.size(); ++n) {
        const double slack = (tot[n - 1] - tot[n]) / tot[0];
        if (slack < worst) {
            worst = slack;
            at = n;
        }
    }
    double rule_gap = 0.0;
    for (std::size_t n = 0; n < tot.size(); ++n) rule_gap = std::max(rule_gap, std::abs(tot[n] - trap[n]) / std::abs(tot[n]));
    r.margin = tot.size() > 1 ? worst : 0.0;
    r.holds = r.margin >= -r.tolerance;
    r.asserted = tmin > threshold;
    std::ostringstream os;
    os << "tau_min=" << fmt(tmin) << " threshold=" << fmt(threshold)
       << (r.asserted ? " threshold=met" : " threshold=not-met") << " worst_t=" << fmt(field.grid.times[at])
       << " p_tot_0=" << fmt(tot.front()) << " p_tot_T=" << fmt(tot.back()) << " simpson_vs_trapezoid=" << fmt(rule_gap);
    r.details = os.str();
    return r;
}

namespace {

/// e^{rate t} h(x, t) on the field's grid, rate = eta - delta - eta tau_min.
Field2D bound_field(const ModelParams& params, const SolutionField& field, const InitialProfile& profile,
                    const SpatialDomain& domain, double tmin) {
    const Grid& g = field.grid;
    const bool oracle = field.provenance == Provenance::FdOracleLocal || field.provenance == Provenance::FdOracleGlobal;
    if (oracle) {
        // Same scheme as the field: solve q_t = d q_xx + rate q, so a constant tax reproduces p exactly.
        return oracle::diffuse_forward(profile, params, domain, g, oracle::TaxPath{[=](double) { return tmin; }}).p;
    }
    Field2D h(g.nt(), g.nx());
    if (domain.is_bounded()) {
        const spectral::HeatSeries heat(profile, domain, params.diffusivity);
        for (std::size_t n = 0; n < g.nt(); ++n)
            for (std::size_t i = 0; i < g.nx(); ++i) h(n, i) = heat(g.positions[i], g.times[n]);
    } else {
        for (std::size_t n = 0; n < g.nt(); ++n)
            for (std::size_t i = 0; i < g.nx(); ++i)
                h(n, i) = greens::heat_convolve(profile, params.diffusivity, g.times[n], g.positions[i]).value;
    }
    const double rate = params.eta - params.delta - params.eta * tmin;
    for (std::size_t n = 0; n < g.nt(); ++n) {
        const double f = std::exp(rate * g.times[n]);
        for (std::size_t i = 0; i < g.nx(); ++i) h(n, i) *= f;
    }
    return h;
}

}  // namespace

PropositionReport check_upper_bound(const ModelParams& params, const SolutionField& field,
                                    const InitialProfile& profile, const SpatialDomain& domain) {
    PropositionReport r;
    r.name = "upper_bound";
    r.tolerance = 1e-8;
    const double tmin = tau_min(field);
    const Field2D bound = bound_field(params, field, profile, domain, tmin);
    const double scale = sup_abs(field.p.values());
    double worst = std::numeric_limits<double>::infinity();
    std::size_t wn = 0, wi = 0;
    for (std::size_t n = 0; n < field.grid.nt(); ++n) {
        for (std::size_t i = 0; i < field.grid.nx(); ++i) {
            const double slack = (bound(n, i) - field.p(n, i)) / scale;
            if (slack < worst) {
                worst = slack;
                wn = n;
                wi = i;
            }
        }
    }
    r.margin = worst;
    r.holds = r.margin >= -r.tolerance;
    std::ostringstream os;
    os << "tau_min=" << fmt(tmin) << " solver=" << to_string(field.provenance) << " worst_x=" << fmt(field.grid.positions[wi])
       << " worst_t=" << fmt(field.grid.times[wn]);
    r.details = os.str();
    return r;
}

PropositionReport check_longrun_cleanup(const ModelParams& params, const SpatialDomain& domain,
                                        const InitialProfile& profile, const std::vector<double>& horizons,
                                        const CleanupPolicy& policy, std::size_t nx, std::size_t nt) {
    PropositionReport r;
    r.name = "longrun_cleanup";
    r.tolerance = 1e-8;
    if (horizons.empty()) fail(ErrorCode::InvalidArgument, "longrun check needs at least one horizon");
    std::vector<double> pmax, bound;
    bool threshold_met = true;
    std::ostringstream os;
    for (double T : horizons) {
        ModelParams pt = params;
        pt.horizon = T;
        pt.validate();
        const Grid grid = make_grid(domain, pt, nx, nt);
        SolutionField f;
        std::function<double(double)> tax;
        if (policy.kind == PolicyKind::FixedTax) tax = [v = policy.tax](double) { return v; };
        if (policy.kind == PolicyKind::Local) tax = [pt](double t) { return aspatial::tau_star(pt, std::min(t, pt.horizon)); };
        if (domain.is_bounded()) {
            if (policy.kind == PolicyKind::Global) f = spectral::global_solution_bounded(pt, domain, profile, grid);
            else f = spectral::TaxedDiffusion(pt, domain, profile, tax).sample(grid, Provenance::SpectralLocal);
        } else {
            if (policy.kind == PolicyKind::Global) f = greens::global_solution_unbounded(pt, profile, grid);
            else f = greens::taxed_diffusion_unbounded(pt, profile, grid, tax, {}, Provenance::GreensLocal);
        }
        const double tmin = tau_min(f);
        threshold_met = threshold_met && tmin > pt.tax_threshold();
        const Field2D h = bound_field(pt, f, profile, domain, tmin);
        double pm = 0.0, hm = 0.0;
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            pm = std::max(pm, f.p(grid.nt() - 1, i));
            hm = std::max(hm, h(grid.nt() - 1, i));
        }
        pmax.push_back(pm);
        bound.push_back(hm);
        os << " T=" << fmt(T) << ":max_p=" << fmt(pm) << ",bound=" << fmt(bound.back()) << ",tau_min=" << fmt(tmin);
    }
    const double scale = pmax.front();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pmax.size(); ++k) {
        worst = std::min(worst, (bound[k] - pmax[k]) / scale);
        if (k > 0) worst = std::min(worst, (pmax[k - 1] - pmax[k]) / scale);
    }
    r.margin = worst;
    r.holds = r.margin >= -r.tolerance;
    r.asserted = threshold_met;
    r.details = std::string(threshold_met ? "threshold=met" : "threshold=not-met") + os.str();
    return r;
}

}  // namespace tbpc::analysis
