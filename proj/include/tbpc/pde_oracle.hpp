#pragma once

#include "tbpc/core.hpp"

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tbpc::oracle {

struct SweepConfig {
    std::size_t nx = 201;
    std::size_t nt = 201;
    double relaxation = 0.5;      // w in u <- (1-w)u + w eta lambda
    std::size_t max_iters = 200;
    double convergence_tol = 1e-6; // sup |change in u| between sweeps
    void validate() const;
};

/// Second difference with Neumann ghost points, (2p_1 - 2p_0)/h^2 at the edges.
/// Self-adjoint in the trapezoid-weighted inner product.
class NeumannLaplacian {
public:
    NeumannLaplacian(std::size_t n, double h);

    void apply(std::span<const double> in, std::span<double> out) const;
    /// W^{-1} L^T W with W the trapezoid weights.
    void adjoint(std::span<const double> in, std::span<double> out) const;
    double inner(std::span<const double> a, std::span<const double> b) const;

    std::size_t size() const { return n_; }
    double spacing() const { return h_; }

private:
    std::size_t n_;
    double h_;
};

/// Tax depending on time only, a tax field on the grid, or a prescribed control field.
struct TaxPath {
    std::function<double(double)> tau;
};
struct TaxField {
    Field2D tau;
};
struct ControlField {
    Field2D u;
};
using Source = std::variant<TaxPath, TaxField, ControlField>;

/// Crank-Nicolson solve of p_t = d p_xx + (eta - delta) p - eta u.  Bounded domains
/// use Neumann edges; unbounded windows are padded by 6 sqrt(2 d T) with Neumann
/// closure.  The first output interval is covered by a graded sequence of substeps.
/// `warnings` (optional) receives conditioning notes.
SolutionField diffuse_forward(const InitialProfile& profile, const ModelParams& params, const SpatialDomain& domain,
                              const Grid& grid, const Source& source, std::vector<std::string>* warnings = nullptr);

struct CostateField {
    Grid grid;
    Field2D lambda;
};

struct SweepResult {
    SolutionField field;
    CostateField costate;
    std::size_t iterations = 0;
    double final_change = 0.0;
    double relaxation = 0.0;
    std::vector<double> cost_history;  // cost of each iterate, initial guess first
};

/// Forward-backward sweep on the global optimality system, starting from the
/// local solution.  Throws NotConverged (with the last change) after max_iters.
SweepResult forward_backward_sweep(const InitialProfile& profile, const ModelParams& params,
                                   const SpatialDomain& domain, const SweepConfig& config = {});
SweepResult forward_backward_sweep(const InitialProfile& profile, const ModelParams& params,
                                   const SpatialDomain& domain, const Grid& grid, const SweepConfig& config);

/// Backward solve of lambda_t = (rho - eta + delta) lambda - d lambda_xx - p from
/// lambda(T) = ((1-theta)/theta) p(T), on the same (padded) discretization.
Field2D solve_costate(const ModelParams& params, const SpatialDomain& domain, const Grid& grid, const Field2D& p);

/// Padding added on each side of an unbounded window.
double unbounded_padding(const ModelParams& params);

}  // namespace tbpc::oracle
