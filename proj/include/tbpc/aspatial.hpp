#pragma once

#include "tbpc/core.hpp"

#include <functional>
#include <span>
#include <vector>

namespace tbpc::aspatial {

/// Optimal tax rate of the a-spatial problem at time t (tanh closed form).
/// Independent of p0 by construction.
double tau_star(const ModelParams& params, double t);

/// The tax formula exactly as typeset (denominator without the tanh factor on
/// theta*[2(delta-eta)+rho]).  Diagnostics only.
double tau_star_printed(const ModelParams& params, double t);

struct ArctanhForm {
    double value = 0.0;
    bool available = false;  // false when the arctanh argument leaves (-1,1)
};

/// (1/2eta){-b + xi tanh(xi(T-t)/2 + artanh(A))}, A = (2(1-theta)eta^2 + theta b)/(theta xi).
ArctanhForm tau_star_arctanh(const ModelParams& params, double t);

/// Printed level paths u*_t and p*_t, verbatim.  Diagnostics only.
double printed_u(const ModelParams& params, double p0, double t);
double printed_p(const ModelParams& params, double p0, double t);

/// One decoupled mode of the linear-quadratic system with decay delta + extra_decay
/// (extra_decay = d k^2 for a spatial mode of wavenumber k).  Evaluated in a form
/// that never forms the growing exponential, so arbitrarily high modes are safe.
class RiccatiMode {
public:
    explicit RiccatiMode(const ModelParams& params, double extra_decay = 0.0);

    /// p(t)/p(0) along the optimal path.
    double growth(double t) const;
    /// u(t)/p(t) along the optimal path.
    double tax(double t) const;
    /// u(0)/p(0); equals terminal_coupling for extra_decay = 0.
    double coupling() const { return tax(0.0); }

    double xi() const { return xi_; }
    double drift_gap() const { return b_; }

private:
    double F(double s) const;

    double eta_;
    double rho_;
    double horizon_;
    double b_;
    double xi_;
    double a_;
    double log_f0_;
};

struct AspatialSolution {
    ModelParams params;
    double p0 = 0.0;
    RiccatiMode mode;
    /// |u_T/p_T - eta(1-theta)/theta|
    double terminal_ratio_residual = 0.0;

    double p(double t) const { return p0 * mode.growth(t); }
    double u(double t) const { return p(t) * mode.tax(t); }
    double tau(double t) const { return mode.tax(t); }
};

/// z_t = p0 exp(Theta t)[1; kappa].  Throws DegenerateCoupling when kappa is undefined.
AspatialSolution solve_aspatial_bvp(const ModelParams& params, double p0);

/// int_0^T (p^2+u^2)/2 e^{-rho t} dt + ((1-theta)/theta) p_T^2/2 e^{-rho T}, Simpson on nt samples.
double aspatial_cost(const ModelParams& params, const AspatialSolution& sol, std::size_t nt = 2001);

/// Same functional for sampled paths on a uniform time grid over [0,T].
double path_cost(const ModelParams& params, std::span<const double> p, std::span<const double> u);

/// RK4 on p' = (eta-delta)p - eta u(t); returns p at nt uniform samples of [0,T].
std::vector<double> propagate_state(const ModelParams& params, double p0,
                                    const std::function<double(double)>& control, std::size_t nt);

/// exp(int_0^t (eta - delta - eta tau*_s) ds) by composite Simpson on the tax path.
double integrating_factor(const ModelParams& params, double t, std::size_t panels = 256);

struct ClosedFormDiscrepancy {
    double drift_gap = 0.0;  // 2(delta-eta)+rho
    double tax_gap = 0.0;    // max |printed u/p - tau| / max |tau|
    double path_gap = 0.0;   // max over p,u of |printed - bvp| / max |bvp|
};

ClosedFormDiscrepancy closed_form_discrepancy(const ModelParams& params, std::size_t samples = 301);

/// Pointwise a-spatial solution p0(x) * growth(t) on a grid (no diffusion).
SolutionField aspatial_field(const ModelParams& params, const InitialProfile& profile, const Grid& grid);

}  // namespace tbpc::aspatial
