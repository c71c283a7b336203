#pragma once

#include "tbpc/core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tbpc::analysis {

struct CostBreakdown {
    double running = 0.0;
    double terminal = 0.0;
    double total = 0.0;
};

/// Discounted running cost plus weighted terminal cost; composite Simpson in x and t.
/// On an unbounded domain this integrates over the reporting window only.
CostBreakdown spatial_cost(const ModelParams& params, const SolutionField& field);

enum class SpatialRule { Simpson, Trapezoid };

/// p_tot(t) = int p(x,t) dx on every grid time.
std::vector<double> aggregate_pollution(const SolutionField& field, SpatialRule rule = SpatialRule::Simpson);

/// Minimum of tau over grid points with p > 1e-12 max p(., 0).
double tau_min(const SolutionField& field);

struct PropositionReport {
    std::string name;
    bool holds = false;
    bool asserted = true;  // false when the hypothesis is not met (report only)
    double margin = 0.0;
    double tolerance = 0.0;
    std::string details;

    /// One line: "<name> holds|fails|report-only margin=<m> tol=<t> <details>".
    std::string to_line() const;
};

/// Gap and cost comparison between the local and global fields.  Homogeneous
/// profiles: holds iff sup|local - global| <= 1e-6 ||p||.  Heterogeneous profiles
/// additionally report the local field's global-FOC residual and the cost gap.
struct LocalGlobalOptions {
    std::size_t nx = 201;
    std::size_t nt = 201;
    std::size_t modes = 64;
};
PropositionReport check_local_equals_global(const ModelParams& params, const SpatialDomain& domain,
                                            const InitialProfile& profile, const LocalGlobalOptions& options = {});

/// If tau_min > (eta-delta)/eta, p_tot must be non-increasing within 1e-8 p_tot(0).
PropositionReport check_aggregate_decay(const ModelParams& params, const SolutionField& field);

/// p <= e^{(eta-delta-eta tau_min)t} h with h the heat evolution of p0 (Neumann series,
/// heat kernel, or the oracle's own heat solve for oracle fields).
PropositionReport check_upper_bound(const ModelParams& params, const SolutionField& field,
                                    const InitialProfile& profile, const SpatialDomain& domain);

enum class PolicyKind { Global, Local, FixedTax };
struct CleanupPolicy {
    PolicyKind kind = PolicyKind::Global;
    double tax = 1.0;  // FixedTax only
};

/// max_x p(x,T) decreasing along the horizons and below e^{(eta-delta-eta tau_min)T} max h(.,T).
PropositionReport check_longrun_cleanup(const ModelParams& params, const SpatialDomain& domain,
                                        const InitialProfile& profile, const std::vector<double>& horizons,
                                        const CleanupPolicy& policy = {}, std::size_t nx = 101, std::size_t nt = 201);

using PointField = std::function<double(double, double)>;

/// Sup-norm residual of the global optimality PDEs
///   p_t = d p_xx + (eta-delta) p - eta u,  u_t = rho u - d u_xx - eta p - (eta-delta) u
/// at the given sample points, by fourth-order differences, relative to max |p|.
double global_foc_residual(const ModelParams& params, const PointField& p, const PointField& u,
                           const std::vector<double>& xs, const std::vector<double>& ts, double hx, double ht);

/// C(a) - C(b).
double cost_gap(const ModelParams& params, const SolutionField& a, const SolutionField& b);

/// sup |a - b| / sup |b| over p (and u when `include_control`).
double relative_gap(const SolutionField& a, const SolutionField& b, bool include_control = true);

}  // namespace tbpc::analysis
