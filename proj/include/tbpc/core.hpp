#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tbpc {

enum class ErrorCode {
    Ok = 0,
    InvalidArgument,
    Parse,
    Io,
    DegenerateCoupling,
    NotConverged,
    Quadrature,
    Internal,
};

std::string_view to_string(ErrorCode code);

/// Exception type used throughout the library; the C API maps `code()` onto
/// its status enum.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

/// Economic and environmental constants of the pollution control problem.
struct ModelParams {
    double eta = 0.0;          // emissions per unit output growth (1/time)
    double delta = 0.0;        // natural decay rate (1/time)
    double rho = 0.0;          // discount rate (1/time)
    double theta = 1.0;        // social-loss weight in (0,1]
    double horizon = 0.0;      // planning horizon T
    double diffusivity = 0.0;  // d >= 0 (space^2/time)

    /// Throws InvalidArgument naming the first offending field.
    void validate() const;

    /// (1-theta)/theta, the weight on the end-of-horizon stock.
    double terminal_weight() const { return (1.0 - theta) / theta; }

    /// Terminal control-to-state ratio u_T / p_T = eta (1-theta)/theta.
    double terminal_ratio() const { return eta * terminal_weight(); }

    /// (eta-delta)/eta: minimal tax for non-increasing aggregate pollution.
    double tax_threshold() const { return (eta - delta) / eta; }

    /// 2(delta-eta)+rho
    double drift_gap() const { return 2.0 * (delta - eta) + rho; }

    static ModelParams paper_2015();
};

/// Initial concentration of the `paper-2015` preset (ppm CO2, year 2015).
inline constexpr double kPaperInitialLevel = 400.23;

/// Bounded interval with Neumann edges, or the real line with a reporting window.
struct SpatialDomain {
    enum class Kind { Bounded, Unbounded };

    Kind kind = Kind::Bounded;
    double lo = 0.0;
    double hi = 1.0;

    static SpatialDomain bounded(double x_a, double x_b);
    static SpatialDomain unbounded(double window_halfwidth);

    bool is_bounded() const { return kind == Kind::Bounded; }
    double length() const { return hi - lo; }
    double window_halfwidth() const { return 0.5 * (hi - lo); }
    void validate() const;
};

class InitialProfile {
public:
    struct Constant {
        double level;
    };
    /// (3/4)level + (1/2)level*exp(-x^2)
    struct CenteredBump {
        double level;
    };
    /// Piecewise-linear through the samples, constant beyond the ends.
    struct Tabulated {
        std::vector<double> positions;
        std::vector<double> values;
    };
    using Form = std::variant<Constant, CenteredBump, Tabulated>;

    static InitialProfile constant(double level);
    static InitialProfile centered_bump(double level);
    static InitialProfile tabulated(std::vector<double> positions, std::vector<double> values);

    double operator()(double x) const;
    const Form& form() const { return form_; }

    bool is_homogeneous() const;
    /// Limits as x -> -inf and x -> +inf.
    double far_left() const;
    double far_right() const;
    /// Global infimum / supremum over the real line.
    double lower_bound() const;
    double upper_bound() const;
    /// Points where the profile is not smooth (tabulated knots).
    std::vector<double> kinks() const;
    std::string describe() const;

private:
    explicit InitialProfile(Form form) : form_(std::move(form)) {}
    Form form_;
};

/// Uniform space-time sampling.  Time-major storage everywhere in the library.
struct Grid {
    std::vector<double> times;
    std::vector<double> positions;

    std::size_t nt() const { return times.size(); }
    std::size_t nx() const { return positions.size(); }
    double dt() const { return times[1] - times[0]; }
    double dx() const { return positions[1] - positions[0]; }
    double horizon() const { return times.back(); }
};

Grid make_grid(const SpatialDomain& domain, const ModelParams& params, std::size_t nx, std::size_t nt);
Grid make_grid(double x_lo, double x_hi, double horizon, std::size_t nx, std::size_t nt);

/// Rejects non-uniform or unsorted samples (relative tolerance 1e-12).
void validate_grid(const Grid& grid);

class Field2D {
public:
    Field2D() = default;
    Field2D(std::size_t nt, std::size_t nx, double fill = 0.0) : nt_(nt), nx_(nx), data_(nt * nx, fill) {}

    double& operator()(std::size_t it, std::size_t ix) { return data_[it * nx_ + ix]; }
    double operator()(std::size_t it, std::size_t ix) const { return data_[it * nx_ + ix]; }

    std::span<double> row(std::size_t it) { return {data_.data() + it * nx_, nx_}; }
    std::span<const double> row(std::size_t it) const { return {data_.data() + it * nx_, nx_}; }

    std::size_t nt() const { return nt_; }
    std::size_t nx() const { return nx_; }
    std::span<const double> values() const { return data_; }
    std::span<double> values() { return data_; }

private:
    std::size_t nt_ = 0;
    std::size_t nx_ = 0;
    std::vector<double> data_;
};

enum class Provenance {
    AspatialClosedForm,
    SpectralLocal,
    SpectralGlobal,
    GreensLocal,
    GreensGlobal,
    FdOracleLocal,
    FdOracleGlobal,
};

std::string_view to_string(Provenance p);

/// p, u and tau = u/p on a grid.  tau is NaN ("absent") where p is below
/// 1e-12 of the reference level.
struct SolutionField {
    Grid grid;
    Field2D p;
    Field2D u;
    Field2D tau;
    Provenance provenance = Provenance::AspatialClosedForm;

    bool has_tax(std::size_t it, std::size_t ix) const;
};

/// Builds tau from p and u; `reference_level` is max p0.
SolutionField make_solution_field(Grid grid, Field2D p, Field2D u, Provenance provenance, double reference_level);

/// Entries of exp(Theta t), Theta = [[eta-delta, -eta], [-eta, rho-eta+delta]].
struct MatExp2 {
    double e11 = 1.0;
    double e12 = 0.0;
    double e21 = 0.0;
    double e22 = 1.0;
};

/// sqrt([2(delta-eta)+rho]^2 + 4 eta^2)
double xi(const ModelParams& params);

/// exp(Theta t) via cosh/sinh of xi t/2; sinh(xi t/2)/xi switches to its
/// Taylor series when xi t < 1e-8.
MatExp2 theta_exp(const ModelParams& params, double t);

/// Verbatim transcription of the matrix as typeset alongside the closed forms;
/// it equals exactly one half of theta_exp and is kept for diagnostics only.
MatExp2 theta_exp_printed(const ModelParams& params, double t);

/// kappa = (theta e21(T) - eta(1-theta) e11(T)) / (eta(1-theta) e12(T) - theta e22(T)).
/// Throws DegenerateCoupling when the denominator is within 1e-12 of zero
/// (relative to the entries).
double terminal_coupling(const ModelParams& params);

}  // namespace tbpc
