#include "tbpc/pde_oracle.hpp"

#include "tbpc/analysis.hpp"
#include "tbpc/aspatial.hpp"
#include "tbpc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tbpc::oracle {

void SweepConfig::validate() const {
    if (nx < 3 || nt < 2) fail(ErrorCode::InvalidArgument, "sweep grid needs nx >= 3 and nt >= 2");
    if (!(relaxation > 0.0 && relaxation <= 1.0)) fail(ErrorCode::InvalidArgument, "relaxation must lie in (0,1]");
    if (max_iters < 1) fail(ErrorCode::InvalidArgument, "max_iters must be >= 1");
    if (!(convergence_tol > 0.0)) fail(ErrorCode::InvalidArgument, "convergence_tol must be > 0");
}

NeumannLaplacian::NeumannLaplacian(std::size_t n, double h) : n_(n), h_(h) {
    if (n < 3 || !(h > 0.0)) fail(ErrorCode::InvalidArgument, "Laplacian needs n >= 3 and h > 0");
}

void NeumannLaplacian::apply(std::span<const double> in, std::span<double> out) const {
    const double s = 1.0 / (h_ * h_);
    out[0] = 2.0 * (in[1] - in[0]) * s;
    for (std::size_t i = 1; i + 1 < n_; ++i) out[i] = (in[i - 1] - 2.0 * in[i] + in[i + 1]) * s;
    out[n_ - 1] = 2.0 * (in[n_ - 2] - in[n_ - 1]) * s;
}

void NeumannLaplacian::adjoint(std::span<const double> in, std::span<double> out) const {
    // (W^{-1} L^T W v)_i = sum_j L_ji w_j v_j / w_i
    const auto w = numerics::trapezoid_weights(n_, h_);
    const double s = 1.0 / (h_ * h_);
    std::vector<double> wv(n_);
    for (std::size_t i = 0; i < n_; ++i) wv[i] = w[i] * in[i];
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        // column i of L: entries L_{i-1,i}, L_{i,i}, L_{i+1,i}
        acc -= 2.0 * s * wv[i];
        if (i > 0) acc += (i - 1 == 0 ? 2.0 : 1.0) * s * wv[i - 1];
        if (i + 1 < n_) acc += (i + 1 == n_ - 1 ? 2.0 : 1.0) * s * wv[i + 1];
        out[i] = acc / w[i];
    }
}

double NeumannLaplacian::inner(std::span<const double> a, std::span<const double> b) const {
    const auto w = numerics::trapezoid_weights(n_, h_);
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += w[i] * a[i] * b[i];
    return s;
}

double unbounded_padding(const ModelParams& params) {
    return 6.0 * std::sqrt(2.0 * params.diffusivity * params.horizon);
}

namespace {

struct Layout {
    std::vector<double> x;
    std::size_t offset = 0;
    std::size_t report = 0;
    double h = 0.0;
};

Layout make_layout(const ModelParams& params, const SpatialDomain& domain, const Grid& grid) {
    Layout L;
    L.h = grid.dx();
    L.report = grid.nx();
    std::size_t pad = 0;
    if (!domain.is_bounded()) pad = static_cast<std::size_t>(std::ceil(unbounded_padding(params) / L.h));
    L.offset = pad;
    L.x.resize(grid.nx() + 2 * pad);
    for (std::size_t i = 0; i < L.x.size(); ++i)
        L.x[i] = grid.positions.front() + L.h * (static_cast<double>(i) - static_cast<double>(pad));
    for (std::size_t i = 0; i < grid.nx(); ++i) L.x[pad + i] = grid.positions[i];
    return L;
}

/// theta-scheme step of v' = d D2 v + c v + s.  `implicit` = 1 gives backward Euler, 0.5 Crank-Nicolson.
void theta_step(double d, double h, double k, double implicit, const std::vector<double>& c_old,
                const std::vector<double>& s_old, const std::vector<double>& c_new, const std::vector<double>& s_new,
                std::vector<double>& v, std::vector<double>& lower, std::vector<double>& diag,
                std::vector<double>& upper, std::vector<double>& rhs) {
    const std::size_t n = v.size();
    const double r = d / (h * h);
    const double ex = k * (1.0 - implicit);
    const double im = k * implicit;
    for (std::size_t i = 0; i < n; ++i) {
        double lap;
        if (i == 0) lap = 2.0 * (v[1] - v[0]);
        else if (i == n - 1) lap = 2.0 * (v[n - 2] - v[n - 1]);
        else lap = v[i - 1] - 2.0 * v[i] + v[i + 1];
        rhs[i] = v[i] + ex * (r * lap + c_old[i] * v[i] + s_old[i]) + im * s_new[i];
        diag[i] = 1.0 - im * (c_new[i] - 2.0 * r);
        lower[i] = -im * r;
        upper[i] = -im * r;
    }
    upper[0] = -2.0 * im * r;
    lower[n - 1] = -2.0 * im * r;
    numerics::solve_tridiagonal(lower, diag, upper, rhs);
    v.swap(rhs);
    rhs.resize(n);
}

/// Substep fractions of the first output interval: 2^-20, 2^-20, 2^-19, ..., 2^-1.
std::vector<double> graded_fractions() {
    std::vector<double> f{std::ldexp(1.0, -20)};
    for (int j = -20; j <= -1; ++j) f.push_back(std::ldexp(1.0, j));
    return f;
}

/// Reaction coefficient and source at continuous time inside interval n (alpha in [0,1]).
using Coefficients = std::function<void(std::size_t n, double alpha, double t, std::vector<double>& c,
                                        std::vector<double>& s)>;

std::vector<std::vector<double>> march_forward(const Layout& L, double d, const std::vector<double>& times,
                                               std::vector<double> v, const Coefficients& coeffs) {
    const std::size_t n = v.size();
    std::vector<std::vector<double>> out;
    out.reserve(times.size());
    out.push_back(v);
    std::vector<double> c0(n), s0(n), c1(n), s1(n), lo(n), di(n), up(n), rhs(n);
    const auto grading = graded_fractions();
    for (std::size_t m = 0; m + 1 < times.size(); ++m) {
        const double dt = times[m + 1] - times[m];
        if (m == 0) {
            double alpha = 0.0;
            for (std::size_t j = 0; j < grading.size(); ++j) {
                const double a1 = alpha + grading[j];
                coeffs(m, alpha, times[m] + alpha * dt, c0, s0);
                coeffs(m, std::min(a1, 1.0), times[m] + std::min(a1, 1.0) * dt, c1, s1);
                theta_step(d, L.h, grading[j] * dt, j < 2 ? 1.0 : 0.5, c0, s0, c1, s1, v, lo, di, up, rhs);
                alpha = a1;
            }
        } else {
            coeffs(m, 0.0, times[m], c0, s0);
            coeffs(m, 1.0, times[m + 1], c1, s1);
            theta_step(d, L.h, dt, 0.5, c0, s0, c1, s1, v, lo, di, up, rhs);
        }
        out.push_back(v);
    }
    return out;
}

std::vector<std::vector<double>> march_costate(const Layout& L, const ModelParams& params,
                                               const std::vector<double>& times,
                                               const std::vector<std::vector<double>>& p) {
    const std::size_t nt = times.size();
    const std::size_t n = p.front().size();
    const double beta = params.rho - params.eta + params.delta;
    std::vector<std::vector<double>> lam(nt);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = params.terminal_weight() * p[nt - 1][i];
    lam[nt - 1] = v;
    const std::vector<double> c(n, -beta);
    std::vector<double> lo(n), di(n), up(n), rhs(n);
    for (std::size_t m = nt - 1; m-- > 0;) {
        // reversed time s = T - t: lambda_s = d D2 lambda - beta lambda + p
        theta_step(params.diffusivity, L.h, times[m + 1] - times[m], 0.5, c, p[m + 1], c, p[m], v, lo, di, up, rhs);
        lam[m] = v;
    }
    return lam;
}

std::vector<double> extend_row(std::span<const double> row, const Layout& L) {
    std::vector<double> out(L.x.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t j = i < L.offset ? 0 : std::min(i - L.offset, L.report - 1);
        out[i] = row[j];
    }
    return out;
}

Field2D crop(const std::vector<std::vector<double>>& rows, const Layout& L) {
    Field2D f(rows.size(), L.report);
    for (std::size_t n = 0; n < rows.size(); ++n)
        for (std::size_t i = 0; i < L.report; ++i) f(n, i) = rows[n][L.offset + i];
    return f;
}

double max_profile(const InitialProfile& profile, const Grid& grid) {
    double m = 0.0;
    for (double x : grid.positions) m = std::max(m, profile(x));
    return m;
}

void check_inputs(const ModelParams& params, const SpatialDomain& domain, const Grid& grid) {
    params.validate();
    domain.validate();
    validate_grid(grid);
    if (std::abs(grid.horizon() - params.horizon) > 1e-9 * params.horizon)
        fail(ErrorCode::InvalidArgument, "grid horizon differs from the model horizon");
}

void note_conditioning(const Layout& L, const Grid& grid, double d, std::vector<std::string>* warnings) {
    if (warnings == nullptr) return;
    const double r = d * grid.dt() / (L.h * L.h);
    if (4.0 * r > 1e8) {
        std::ostringstream os;
        os << "diffusion number d*dt/dx^2 = " << r << " makes the implicit system ill-conditioned";
        warnings->push_back(os.str());
    }
}

}  // namespace

SolutionField diffuse_forward(const InitialProfile& profile, const ModelParams& params, const SpatialDomain& domain,
                              const Grid& grid, const Source& source, std::vector<std::string>* warnings) {
    check_inputs(params, domain, grid);
    const Layout L = make_layout(params, domain, grid);
    note_conditioning(L, grid, params.diffusivity, warnings);
    std::vector<double> p0(L.x.size());
    for (std::size_t i = 0; i < p0.size(); ++i) p0[i] = profile(L.x[i]);
    const double a = params.eta - params.delta;
    const std::size_t n = p0.size();

    auto check_field = [&](const Field2D& f, const char* what) {
        if (f.nt() != grid.nt() || f.nx() != grid.nx())
            fail(ErrorCode::InvalidArgument, std::string(what) + " field does not match the grid");
    };
    std::vector<std::vector<double>> ext_rows;
    auto ext_field = [&](const Field2D& f) {
        ext_rows.clear();
        for (std::size_t m = 0; m < f.nt(); ++m) ext_rows.push_back(extend_row(f.row(m), L));
    };

    Coefficients coeffs;
    if (const auto* tp = std::get_if<TaxPath>(&source)) {
        coeffs = [&, tau = tp->tau](std::size_t, double, double t, std::vector<double>& c, std::vector<double>& s) {
            std::fill(c.begin(), c.end(), a - params.eta * tau(std::min(t, params.horizon)));
            std::fill(s.begin(), s.end(), 0.0);
        };
    } else if (const auto* tf = std::get_if<TaxField>(&source)) {
        check_field(tf->tau, "tax");
        ext_field(tf->tau);
        coeffs = [&](std::size_t m, double alpha, double, std::vector<double>& c, std::vector<double>& s) {
            const auto& r0 = ext_rows[m];
            const auto& r1 = ext_rows[std::min(m + 1, ext_rows.size() - 1)];
            for (std::size_t i = 0; i < n; ++i) c[i] = a - params.eta * ((1.0 - alpha) * r0[i] + alpha * r1[i]);
            std::fill(s.begin(), s.end(), 0.0);
        };
    } else {
        const auto& cf = std::get<ControlField>(source);
        check_field(cf.u, "control");
        ext_field(cf.u);
        coeffs = [&](std::size_t m, double alpha, double, std::vector<double>& c, std::vector<double>& s) {
            const auto& r0 = ext_rows[m];
            const auto& r1 = ext_rows[std::min(m + 1, ext_rows.size() - 1)];
            std::fill(c.begin(), c.end(), a);
            for (std::size_t i = 0; i < n; ++i) s[i] = -params.eta * ((1.0 - alpha) * r0[i] + alpha * r1[i]);
        };
    }

    const auto rows = march_forward(L, params.diffusivity, grid.times, p0, coeffs);
    Field2D p = crop(rows, L);
    Field2D u(grid.nt(), grid.nx());
    for (std::size_t m = 0; m < grid.nt(); ++m) {
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            if (const auto* tp = std::get_if<TaxPath>(&source)) u(m, i) = tp->tau(grid.times[m]) * p(m, i);
            else if (const auto* tf = std::get_if<TaxField>(&source)) u(m, i) = tf->tau(m, i) * p(m, i);
            else u(m, i) = std::get<ControlField>(source).u(m, i);
        }
    }
    return make_solution_field(grid, std::move(p), std::move(u), Provenance::FdOracleLocal, max_profile(profile, grid));
}

Field2D solve_costate(const ModelParams& params, const SpatialDomain& domain, const Grid& grid, const Field2D& p) {
    check_inputs(params, domain, grid);
    if (p.nt() != grid.nt() || p.nx() != grid.nx()) fail(ErrorCode::InvalidArgument, "state field does not match the grid");
    const Layout L = make_layout(params, domain, grid);
    std::vector<std::vector<double>> rows;
    for (std::size_t m = 0; m < p.nt(); ++m) rows.push_back(extend_row(p.row(m), L));
    return crop(march_costate(L, params, grid.times, rows), L);
}

SweepResult forward_backward_sweep(const InitialProfile& profile, const ModelParams& params,
                                   const SpatialDomain& domain, const SweepConfig& config) {
    config.validate();
    const Grid grid = make_grid(domain, params, config.nx, config.nt);
    return forward_backward_sweep(profile, params, domain, grid, config);
}

SweepResult forward_backward_sweep(const InitialProfile& profile, const ModelParams& params,
                                   const SpatialDomain& domain, const Grid& grid, const SweepConfig& config) {
    config.validate();
    check_inputs(params, domain, grid);
    const Layout L = make_layout(params, domain, grid);
    const std::size_t n = L.x.size();
    const std::size_t nt = grid.nt();
    std::vector<double> p0(n);
    for (std::size_t i = 0; i < n; ++i) p0[i] = profile(L.x[i]);
    const double a = params.eta - params.delta;
    const double ref = max_profile(profile, grid);

    // Initial guess: the local solution u = tau* p.
    auto local = march_forward(L, params.diffusivity, grid.times, p0,
                               [&](std::size_t, double, double t, std::vector<double>& c, std::vector<double>& s) {
                                   std::fill(c.begin(), c.end(),
                                             a - params.eta * aspatial::tau_star(params, std::min(t, params.horizon)));
                                   std::fill(s.begin(), s.end(), 0.0);
                               });
    std::vector<std::vector<double>> u(nt, std::vector<double>(n));
    for (std::size_t m = 0; m < nt; ++m) {
        const double tau = aspatial::tau_star(params, grid.times[m]);
        for (std::size_t i = 0; i < n; ++i) u[m][i] = tau * local[m][i];
    }
    std::vector<std::vector<double>> p = std::move(local);

    auto state_for = [&](const std::vector<std::vector<double>>& control) {
        return march_forward(L, params.diffusivity, grid.times, p0,
                             [&](std::size_t m, double alpha, double, std::vector<double>& c, std::vector<double>& s) {
                                 const auto& r0 = control[m];
                                 const auto& r1 = control[std::min(m + 1, nt - 1)];
                                 std::fill(c.begin(), c.end(), a);
                                 for (std::size_t i = 0; i < n; ++i)
                                     s[i] = -params.eta * ((1.0 - alpha) * r0[i] + alpha * r1[i]);
                             });
    };
    auto cost_of = [&](const std::vector<std::vector<double>>& pp, const std::vector<std::vector<double>>& uu) {
        const SolutionField f = make_solution_field(grid, crop(pp, L), crop(uu, L), Provenance::FdOracleGlobal, ref);
        return analysis::spatial_cost(params, f).total;
    };

    SweepResult result{make_solution_field(grid, Field2D(nt, grid.nx(), 1.0), Field2D(nt, grid.nx()),
                                           Provenance::FdOracleGlobal, 1.0),
                       CostateField{grid, Field2D()}, 0, 0.0, config.relaxation, {}};
    result.cost_history.push_back(cost_of(p, u));

    double w = config.relaxation;
    int halvings = 0;
    double previous = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> lam;
    for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
        lam = march_costate(L, params, grid.times, p);
        double change = 0.0;
        for (std::size_t m = 0; m < nt; ++m)
            for (std::size_t i = 0; i < n; ++i) {
                const double target = params.eta * lam[m][i];
                const double du = w * (target - u[m][i]);
                change = std::max(change, std::abs(du));
                u[m][i] += du;
            }
        p = state_for(u);
        result.cost_history.push_back(cost_of(p, u));
        result.iterations = iter;
        result.final_change = change;
        result.relaxation = w;
        if (change <= config.convergence_tol) {
            lam = march_costate(L, params, grid.times, p);
            result.field = make_solution_field(grid, crop(p, L), crop(u, L), Provenance::FdOracleGlobal, ref);
            result.costate = CostateField{grid, crop(lam, L)};
            return result;
        }
        if (change > previous && halvings < 4) {
            w *= 0.5;
            ++halvings;
        }
        previous = change;
    }
    std::ostringstream os;
    os << "forward-backward sweep did not converge in " << config.max_iters << " iterations; last change "
       << result.final_change;
    fail(ErrorCode::NotConverged, os.str());
}

}  // namespace tbpc::oracle
