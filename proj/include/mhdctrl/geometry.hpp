/// @file geometry.hpp
/// @brief Return-method ingredients: the time profile gamma with plateau
///        [1/4,3/4], the spatial cutoff chi (1 on closure(Omega2), compactly
///        supported in Omega3), the data ramp lambda, the return field
///        y*(x,t) = gamma(t) chi(x) e1, and the time weight omega_k.

#pragma once

#include <cmath>

#include "mhdctrl/grid.hpp"

namespace mhdctrl {

/// phi(v) = exp(-1/v) for v > 0, else 0.  Building block of all cutoffs.
inline double smooth_phi(double v) { return v > 0.0 ? std::exp(-1.0 / v) : 0.0; }

/// Smooth monotone step: 0 for v <= 0, 1 for v >= 1.
inline double smooth_step(double v) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    const double a = smooth_phi(v);
    const double b = smooth_phi(1.0 - v);
    return a / (a + b);
}

/// One-dimensional plateau profile: 1 on [a,b], 0 outside [a-ra, b+rb],
/// smooth monotone ramps in between.
struct PlateauProfile {
    double a = 0, b = 1;    // plateau
    double ra = 0, rb = 0;  // ramp widths (0 disables the ramp: hard ends)

    double operator()(double v) const {
        if (v < a) return ra > 0 ? smooth_step((v - (a - ra)) / ra) : 0.0;
        if (v > b) return rb > 0 ? smooth_step(((b + rb) - v) / rb) : 0.0;
        return 1.0;
    }
};

/// Return trajectory profile: gamma(t) = M * B(t) with B a mollified
/// trapezoid whose plateau is exactly [1/4, 3/4] and whose support is
/// [ramp_lo, 1 - ramp_lo] inside (0,1); the spatial cutoff chi = 1 on
/// closure(Omega2) with support margin chi_margin from the boundary of
/// Omega3; lambda(t) ramps the initial data down over [d, 2d].
struct ReturnProfile {
    double M = 0.0;
    double lambda_d = 0.1;        // d in (0, 1/2)
    double gamma_support_lo = 0.125;  // support of gamma = [lo, 1-lo]
    DomainSpec dom;
    double chi_margin = 0.0;      // support gap kept from the Omega3 boundary

    PlateauProfile gamma_shape;   // plateau [1/4,3/4] in t
    PlateauProfile chi_x, chi_y;  // tensor factors of chi

    static ReturnProfile make(const DomainSpec& d, double M, double lambda_d = 0.1,
                              double gamma_support_lo = 0.125) {
        if (!(M > 0.0)) throw std::invalid_argument("ReturnProfile: M must be positive");
        if (!(lambda_d > 0.0 && lambda_d < 0.5))
            throw std::invalid_argument("ReturnProfile: d must lie in (0, 1/2)");
        ReturnProfile p;
        p.M = M;
        p.lambda_d = lambda_d;
        p.gamma_support_lo = gamma_support_lo;
        p.dom = d;
        p.chi_margin = 0.5 * d.l;
        p.gamma_shape = PlateauProfile{0.25, 0.75, 0.25 - gamma_support_lo, 0.25 - gamma_support_lo};
        // chi ramps between Omega2 and the retained margin: width l - chi_margin
        const double rw = d.l - p.chi_margin;
        p.chi_x = PlateauProfile{-d.l, d.L + d.l, rw, rw};
        p.chi_y = PlateauProfile{-d.l, d.W + d.l, rw, rw};
        return p;
    }

    double gamma(double t) const { return M * gamma_shape(t); }
    double gamma_dot(double t) const {  // centred difference; gamma is analytic glue
        const double e = 1e-6;
        return (gamma(t + e) - gamma(t - e)) / (2 * e);
    }
    double chi(double x, double y) const { return chi_x(x) * chi_y(y); }
    double lambda(double t) const {
        const double d = lambda_d;
        if (t <= d) return 1.0;
        if (t >= 2 * d) return 0.0;
        return smooth_step((2 * d - t) / d);
    }
};

/// y*(x,t) = (gamma(t) chi(x), 0).  Throws for x outside closure(Omega3).
inline void y_star(const ReturnProfile& p, double x, double y, double t, double& vx, double& vy) {
    if (!p.dom.omega3().contains(x, y))
        throw std::domain_error("y_star: point outside closure(Omega3)");
    vx = p.gamma(t) * p.chi(x, y);
    vy = 0.0;
}

/// The time weight omega_k(t) = (1/2 + t/8)^(-k).
inline double weight_eval(double t, double k) {
    return std::pow(0.5 + 0.125 * t, -k);
}

/// Exact value of the integral I(k) = int_0^1 omega_k(s)^(-2) ds.
inline double weight_inv_sq_integral_exact(double k) {
    const double p = 2 * k + 1;
    return 8.0 / p * (std::pow(0.625, p) - std::pow(0.5, p));
}

/// sup over sampled t of omega_k(t) * int_0^1 omega_k(s)^(-2) ds, the integral
/// computed by composite Simpson quadrature.  Asserts the bound 5/(2k+1).
inline double weight_trick_bound(double k, int quad_panels = 512) {
    if (quad_panels % 2) ++quad_panels;
    const double h = 1.0 / quad_panels;
    double integral = 0.0;
    for (int i = 0; i <= quad_panels; ++i) {
        double w = (i == 0 || i == quad_panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        double s = i * h;
        integral += w / (weight_eval(s, k) * weight_eval(s, k));
    }
    integral *= h / 3.0;
    double sup = 0.0;
    for (int i = 0; i <= quad_panels; ++i) sup = std::max(sup, weight_eval(i * h, k) * integral);
    if (!(sup <= 5.0 / (2 * k + 1)))
        throw numerical_error("weight_trick_bound: bound 5/(2k+1) violated");
    return sup;
}

/// omega_k(t) * int_0^t omega_k(s)^(-1) ds, closed form.  Decreases to zero
/// as k grows for every fixed t.
inline double weight_decay_value(double t, double k) {
    const double p = k + 1;
    double integral = 8.0 / p * (std::pow(0.5 + 0.125 * t, p) - std::pow(0.5, p));
    return weight_eval(t, k) * integral;
}

/// Proposed plateau speed before flush validation (see choose_M in flow).
inline double choose_M_initial(const DomainSpec& d) { return 2.5 * (d.L + 2.0 * d.l); }

}  // namespace mhdctrl
