#include "tbpc/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tbpc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Ok: return "ok";
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::Parse: return "parse error";
        case ErrorCode::Io: return "i/o error";
        case ErrorCode::DegenerateCoupling: return "degenerate terminal coupling";
        case ErrorCode::NotConverged: return "not converged";
        case ErrorCode::Quadrature: return "quadrature failure";
        case ErrorCode::Internal: return "internal error";
    }
    return "unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) fail(ErrorCode::InvalidArgument, message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void ModelParams::validate() const {
    require(finite(eta) && eta > 0.0, "eta must be > 0");
    require(finite(delta) && delta > 0.0, "delta must be > 0");
    require(finite(rho) && rho > 0.0, "rho must be > 0");
    require(finite(theta) && theta > 0.0 && theta <= 1.0, "theta must lie in (0,1]");
    require(finite(horizon) && horizon > 0.0, "horizon must be > 0");
    require(finite(diffusivity) && diffusivity >= 0.0, "diffusivity must be >= 0");
}

ModelParams ModelParams::paper_2015() {
    return ModelParams{.eta = 0.051, .delta = 0.05, .rho = 0.04, .theta = 0.5, .horizon = 30.0, .diffusivity = 0.01};
}

SpatialDomain SpatialDomain::bounded(double x_a, double x_b) {
    SpatialDomain d{Kind::Bounded, x_a, x_b};
    d.validate();
    return d;
}

SpatialDomain SpatialDomain::unbounded(double window_halfwidth) {
    SpatialDomain d{Kind::Unbounded, -window_halfwidth, window_halfwidth};
    d.validate();
    return d;
}

void SpatialDomain::validate() const {
    require(finite(lo) && finite(hi), "domain bounds must be finite");
    if (kind == Kind::Bounded) {
        require(lo < hi, "bounded domain needs x_a < x_b");
    } else {
        require(hi > 0.0 && lo == -hi, "unbounded window half-width must be > 0");
    }
}

// ---------------------------------------------------------------------------

InitialProfile InitialProfile::constant(double level) {
    require(finite(level) && level > 0.0, "constant profile level must be > 0");
    return InitialProfile(Constant{level});
}

InitialProfile InitialProfile::centered_bump(double level) {
    require(finite(level) && level > 0.0, "bump profile level must be > 0");
    return InitialProfile(CenteredBump{level});
}

InitialProfile InitialProfile::tabulated(std::vector<double> positions, std::vector<double> values) {
    require(positions.size() == values.size(), "tabulated profile: positions and values differ in length");
    require(positions.size() >= 3, "tabulated profile needs at least 3 samples");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        require(finite(positions[i]) && finite(values[i]), "tabulated profile: non-finite sample");
        require(values[i] > 0.0, "tabulated profile values must be strictly positive");
        if (i > 0) require(positions[i] > positions[i - 1], "tabulated profile positions must be strictly increasing");
    }
    return InitialProfile(Tabulated{std::move(positions), std::move(values)});
}

double InitialProfile::operator()(double x) const {
    struct Visitor {
        double x;
        double operator()(const Constant& c) const { return c.level; }
        double operator()(const CenteredBump& b) const { return 0.75 * b.level + 0.5 * b.level * std::exp(-x * x); }
        double operator()(const Tabulated& t) const {
            const auto& xs = t.positions;
            if (x <= xs.front()) return t.values.front();
            if (x >= xs.back()) return t.values.back();
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t j = static_cast<std::size_t>(it - xs.begin());
            const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
            return (1.0 - w) * t.values[j - 1] + w * t.values[j];
        }
    };
    return std::visit(Visitor{x}, form_);
}

bool InitialProfile::is_homogeneous() const {
    if (std::holds_alternative<Constant>(form_)) return true;
    if (const auto* t = std::get_if<Tabulated>(&form_)) {
        return std::all_of(t->values.begin(), t->values.end(), [&](double v) { return v == t->values.front(); });
    }
    return false;
}

double InitialProfile::far_left() const {
    if (const auto* c = std::get_if<Constant>(&form_)) return c->level;
    if (const auto* b = std::get_if<CenteredBump>(&form_)) return 0.75 * b->level;
    return std::get<Tabulated>(form_).values.front();
}

double InitialProfile::far_right() const {
    if (const auto* t = std::get_if<Tabulated>(&form_)) return t->values.back();
    return far_left();
}

double InitialProfile::lower_bound() const {
    if (const auto* t = std::get_if<Tabulated>(&form_)) return *std::min_element(t->values.begin(), t->values.end());
    return far_left();
}

double InitialProfile::upper_bound() const {
    if (const auto* c = std::get_if<Constant>(&form_)) return c->level;
    if (const auto* b = std::get_if<CenteredBump>(&form_)) return 1.25 * b->level;
    const auto& v = std::get<Tabulated>(form_).values;
    return *std::max_element(v.begin(), v.end());
}

std::vector<double> InitialProfile::kinks() const {
    if (const auto* t = std::get_if<Tabulated>(&form_)) return t->positions;
    return {};
}

std::string InitialProfile::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (const auto* c = std::get_if<Constant>(&form_)) {
        os << "constant(" << c->level << ")";
    } else if (const auto* b = std::get_if<CenteredBump>(&form_)) {
        os << "centered_bump(" << b->level << ")";
    } else {
        os << "tabulated(" << std::get<Tabulated>(form_).positions.size() << " samples)";
    }
    return os.str();
}

// ---------------------------------------------------------------------------

Grid make_grid(double x_lo, double x_hi, double horizon, std::size_t nx, std::size_t nt) {
    require(nx >= 3, "grid needs nx >= 3");
    require(nt >= 2, "grid needs nt >= 2");
    require(x_hi > x_lo, "grid needs x_lo < x_hi");
    require(horizon > 0.0, "grid needs a positive horizon");
    Grid g;
    g.positions.resize(nx);
    g.times.resize(nt);
    const double hx = (x_hi - x_lo) / static_cast<double>(nx - 1);
    for (std::size_t i = 0; i < nx; ++i) g.positions[i] = x_lo + hx * static_cast<double>(i);
    g.positions.back() = x_hi;
    const double ht = horizon / static_cast<double>(nt - 1);
    for (std::size_t n = 0; n < nt; ++n) g.times[n] = ht * static_cast<double>(n);
    g.times.back() = horizon;
    return g;
}

Grid make_grid(const SpatialDomain& domain, const ModelParams& params, std::size_t nx, std::size_t nt) {
    domain.validate();
    return make_grid(domain.lo, domain.hi, params.horizon, nx, nt);
}

namespace {

void check_uniform(const std::vector<double>& v, const char* what) {
    if (v.size() < 2) fail(ErrorCode::InvalidArgument, std::string(what) + ": need at least 2 samples");
    const double h = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
    if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, std::string(what) + ": samples must be increasing");
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double step = v[i] - v[i - 1];
        if (std::abs(step - h) > 1e-12 * std::max(std::abs(h), std::abs(v.back()) + std::abs(v.front())) + 1e-12 * h)
            fail(ErrorCode::InvalidArgument, std::string(what) + ": non-uniform spacing is not supported");
    }
}

}  // namespace

void validate_grid(const Grid& grid) {
    check_uniform(grid.positions, "grid positions");
    check_uniform(grid.times, "grid times");
    if (grid.times.front() != 0.0) fail(ErrorCode::InvalidArgument, "grid times must start at 0");
    if (grid.nx() < 3) fail(ErrorCode::InvalidArgument, "grid needs nx >= 3");
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::AspatialClosedForm: return "aspatial";
        case Provenance::SpectralLocal: return "spectral_local";
        case Provenance::SpectralGlobal: return "spectral_global";
        case Provenance::GreensLocal: return "greens_local";
        case Provenance::GreensGlobal: return "greens_global";
        case Provenance::FdOracleLocal: return "oracle_local";
        case Provenance::FdOracleGlobal: return "oracle_global";
    }
    return "unknown";
}

bool SolutionField::has_tax(std::size_t it, std::size_t ix) const { return !std::isnan(tau(it, ix)); }

SolutionField make_solution_field(Grid grid, Field2D p, Field2D u, Provenance provenance, double reference_level) {
    if (p.nt() != grid.nt() || p.nx() != grid.nx() || u.nt() != grid.nt() || u.nx() != grid.nx())
        fail(ErrorCode::Internal, "make_solution_field: shape mismatch");
    Field2D tau(grid.nt(), grid.nx(), std::numeric_limits<double>::quiet_NaN());
    const double floor = 1e-12 * reference_level;
    for (std::size_t n = 0; n < grid.nt(); ++n)
        for (std::size_t i = 0; i < grid.nx(); ++i)
            if (p(n, i) > floor) tau(n, i) = u(n, i) / p(n, i);
    return SolutionField{std::move(grid), std::move(p), std::move(u), std::move(tau), provenance};
}

// ---------------------------------------------------------------------------

double xi(const ModelParams& params) {
    const double b = params.drift_gap();
    return std::sqrt(b * b + 4.0 * params.eta * params.eta);
}

namespace {

// sinh(xi t/2)/xi with its small-argument limit t/2 (1 + (xi t)^2/24).
double sinh_over_xi(double x, double t) {
    const double z = x * t;
    if (z < 1e-8) return 0.5 * t * (1.0 + z * z / 24.0);
    return std::sinh(0.5 * z) / x;
}

}  // namespace

MatExp2 theta_exp(const ModelParams& params, double t) {
    const double x = xi(params);
    const double b = params.drift_gap();
    const double scale = std::exp(0.5 * params.rho * t);
    const double c = std::cosh(0.5 * x * t);
    const double s = sinh_over_xi(x, t);
    MatExp2 m;
    m.e11 = scale * (c - b * s);
    m.e22 = scale * (c + b * s);
    m.e12 = -2.0 * params.eta * scale * s;
    m.e21 = m.e12;
    return m;
}

MatExp2 theta_exp_printed(const ModelParams& params, double t) {
    const double x = xi(params);
    const double b = params.drift_gap();
    const double scale = std::exp(0.5 * params.rho * t);
    const double c = std::cosh(0.5 * x * t);
    const double s = sinh_over_xi(x, t);
    MatExp2 m;
    m.e11 = 0.5 * scale * (c - b * s);
    m.e22 = 0.5 * scale * (c + b * s);
    m.e12 = -scale * s * params.eta;
    m.e21 = m.e12;
    return m;
}

double terminal_coupling(const ModelParams& params) {
    const MatExp2 e = theta_exp(params, params.horizon);
    const double w = params.eta * (1.0 - params.theta);
    const double num = params.theta * e.e21 - w * e.e11;
    const double den = w * e.e12 - params.theta * e.e22;
    const double scale = std::abs(w * e.e12) + std::abs(params.theta * e.e22);
    if (std::abs(den) <= 1e-12 * scale) fail(ErrorCode::DegenerateCoupling, "terminal coupling denominator vanishes");
    return num / den;
}

}  // namespace tbpc
