#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace tbpc::numerics {

/// Composite Simpson weights for `n` uniformly spaced samples with spacing h.
/// An odd number of intervals closes with the 3/8 rule on the last three.
std::vector<double> simpson_weights(std::size_t n, double h);

double simpson(std::span<const double> values, double h);

/// Trapezoid weights (the midpoint rule of the piecewise-linear interpolant).
std::vector<double> trapezoid_weights(std::size_t n, double h);

/// Simpson integral of f over [a,b] with `panels` (even) subintervals.
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t panels);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Physicists' Gauss-Hermite rule: sum w_i f(x_i) ~ int exp(-x^2) f(x) dx.
/// Golub-Welsch nodes and weights for weight e^{-x^2}; cached per order.
const QuadratureRule& gauss_hermite(std::size_t order);

/// 20-point Gauss-Legendre panels of width <= max_width covering [a,b].
QuadratureRule gauss_legendre_panels(double a, double b, double max_width);

/// Solves a tridiagonal system in place (Thomas elimination).  `lower[0]` and
/// `upper[n-1]` are ignored.  The right-hand side is overwritten with the solution.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

/// Counter-based generator: draw `index` of stream `key` is a pure function of
/// (seed, key, index).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t key) : base_(mix(seed ^ mix(key + 0x9e3779b97f4a7c15ULL))) {}

    /// Uniform in (0,1).
    double uniform(std::uint64_t index) const;
    /// Standard normal via Box-Muller on draws (2k, 2k+1).
    double normal(std::uint64_t index) const;

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t base_;
};

/// FNV-1a 64-bit digest.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace tbpc::numerics
