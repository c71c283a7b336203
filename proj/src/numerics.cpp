#include "tbpc/numerics.hpp"

#include "tbpc/core.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace tbpc::numerics {

std::vector<double> simpson_weights(std::size_t n, double h) {
    if (n < 2) fail(ErrorCode::InvalidArgument, "simpson_weights: need at least 2 samples");
    std::vector<double> w(n, 0.0);
    if (n == 2) {
        w[0] = w[1] = 0.5 * h;
        return w;
    }
    if (n == 3) {
        w[0] = w[2] = h / 3.0;
        w[1] = 4.0 * h / 3.0;
        return w;
    }
    std::size_t intervals = n - 1;
    std::size_t simpson_end = intervals;  // index of last node covered by Simpson
    if (intervals % 2 == 1) simpson_end = intervals - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (intervals % 2 == 1) {
        std::size_t s = simpson_end;
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[s + 3] += 3.0 * h / 8.0;
    }
    return w;
}

double simpson(std::span<const double> values, double h) {
    auto w = simpson_weights(values.size(), h);
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i];
    return s;
}

std::vector<double> trapezoid_weights(std::size_t n, double h) {
    std::vector<double> w(n, h);
    w.front() = w.back() = 0.5 * h;
    return w;
}

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t panels) {
    if (panels % 2 == 1) ++panels;
    const double h = (b - a) / static_cast<double>(panels);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < panels; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    return s * h / 3.0;
}

namespace {

QuadratureRule build_gauss_hermite(std::size_t n) {
    // Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the Hermite recurrence.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
    for (std::size_t j = 1; j < n; ++j) sub(static_cast<Eigen::Index>(j - 1)) = std::sqrt(0.5 * static_cast<double>(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) fail(ErrorCode::Internal, "gauss_hermite: eigen decomposition failed");
    QuadratureRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const double mass = std::sqrt(std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
        // Descending order, symmetrised so the rule is exactly odd-symmetric.
        const auto k = static_cast<Eigen::Index>(n - 1 - i);
        const auto kr = static_cast<Eigen::Index>(i);
        const double v = es.eigenvectors()(0, k);
        const double vr = es.eigenvectors()(0, kr);
        rule.nodes[i] = 0.5 * (es.eigenvalues()(k) - es.eigenvalues()(kr));
        rule.weights[i] = 0.5 * mass * (v * v + vr * vr);
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const QuadratureRule& gauss_hermite(std::size_t order) {
    if (order < 2 || order > 400) fail(ErrorCode::InvalidArgument, "gauss_hermite: order must be in [2, 400]");
    static std::mutex mutex;
    static std::map<std::size_t, QuadratureRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_gauss_hermite(order)).first;
    return it->second;
}

QuadratureRule gauss_legendre_panels(double a, double b, double max_width) {
    using rule20 = boost::math::quadrature::gauss<double, 20>;
    const auto& abscissa = rule20::abscissa();
    const auto& weights = rule20::weights();
    QuadratureRule out;
    if (!(b > a)) return out;
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_width));
    const double width = (b - a) / static_cast<double>(panels);
    out.nodes.reserve(panels * 20);
    out.weights.reserve(panels * 20);
    for (std::size_t k = 0; k < panels; ++k) {
        const double mid = a + width * (static_cast<double>(k) + 0.5);
        const double half = 0.5 * width;
        // boost stores the non-negative half of the symmetric rule.
        for (std::size_t j = 0; j < abscissa.size(); ++j) {
            const double x = abscissa[j];
            const double w = weights[j];
            if (x == 0.0) {
                out.nodes.push_back(mid);
                out.weights.push_back(w * half);
                continue;
            }
            out.nodes.push_back(mid - half * x);
            out.weights.push_back(w * half);
            out.nodes.push_back(mid + half * x);
            out.weights.push_back(w * half);
        }
    }
    return out;
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> c(n, 0.0);
    double beta = diag[0];
    if (beta == 0.0) fail(ErrorCode::Internal, "solve_tridiagonal: zero pivot");
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        c[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i];
        if (beta == 0.0) fail(ErrorCode::Internal, "solve_tridiagonal: zero pivot");
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i + 1] * rhs[i + 1];
}

std::uint64_t CounterRng::mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t index) const {
    const std::uint64_t bits = mix(base_ + mix(index));
    // 53 random bits, shifted off zero.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t index) const {
    const std::uint64_t pair = index / 2;
    const double u1 = uniform(2 * pair);
    const double u2 = uniform(2 * pair + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return index % 2 == 0 ? r * std::cos(angle) : r * std::sin(angle);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace tbpc::numerics
