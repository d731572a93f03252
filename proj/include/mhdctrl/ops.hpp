/// @file ops.hpp
/// @brief Discrete differential operators, Holder-norm estimation on
///        subdomains, and the reflection extension operators pi_1 / pi_2.

#pragma once

#include "mhdctrl/field.hpp"
#include "mhdctrl/geometry.hpp"

namespace mhdctrl {

/// d/dx of f restricted to box b: centred second order inside, one-sided
/// second order at the box edges.  Only box nodes of out are written.
void ddx_box(const ScalarField& f, const IndexBox& b, ScalarField& out);
void ddy_box(const ScalarField& f, const IndexBox& b, ScalarField& out);

ScalarField ddx(const ScalarField& f);
ScalarField ddy(const ScalarField& f);

ScalarField curl2d(const VectorField& v);  // d1 v2 - d2 v1
ScalarField div2d(const VectorField& v);
VectorField grad(const ScalarField& f);
VectorField perp_grad(const ScalarField& f);  // (d2 f, -d1 f)

/// Box-restricted variants: stencils use only nodes inside b.
ScalarField curl2d_box(const VectorField& v, const IndexBox& b);
ScalarField div2d_box(const VectorField& v, const IndexBox& b);

struct HolderEstimate {
    int m = 0;
    double alpha = 0.5;
    double value = 0.0;
    Subdomain subdomain = Subdomain::Omega;
};

/// Discrete estimate of the C^{m,alpha} norm over a subdomain: finite
/// difference sups of all derivatives up to order m plus, for order m, the
/// max Holder quotient over node pairs at distance <= 4*max(hx,hy).
/// Derivatives use only nodes inside the subdomain.  alpha <= 0 drops the
/// quotient term (plain C^m max-norm).  m > 3 is unsupported.
HolderEstimate holder_norm(const ScalarField& f, int m, double alpha, Subdomain sd);
HolderEstimate holder_norm(const VectorField& f, int m, double alpha, Subdomain sd);

/// Reflection extension: even fold of closure(Omega) values across the duct
/// faces, multiplied by a smooth cutoff that is 1 on closure(Omega) and
/// vanishes before the boundary of Omega2.  Node-exact on closure(Omega),
/// linear, support inside Omega2.
class ExtensionOp {
public:
    explicit ExtensionOp(const GridSpec& g);

    void apply(const ScalarField& f, ScalarField& out) const;
    void apply(const VectorField& f, VectorField& out) const;

    ScalarField apply(const ScalarField& f) const {
        ScalarField out(g_);
        apply(f, out);
        return out;
    }
    VectorField apply(const VectorField& f) const {
        VectorField out(g_);
        apply(f, out);
        return out;
    }

    const ScalarField& cutoff() const { return cut_; }
    /// Analytic cutoff factor (1 on closure(Omega), 0 outside Omega2-margin).
    double cutoff_at(double x, double y) const { return cut_x_(x) * cut_y_(y); }

private:
    GridSpec g_;
    std::vector<int> fold_i_, fold_j_;
    PlateauProfile cut_x_, cut_y_;
    ScalarField cut_;
};

/// Empirical operator constant of the extension over a fixed probe basis:
/// max of holder_norm(pi(f), m, alpha, Omega3) / holder_norm(f, m, alpha, Omega).
/// order 1 probes scalars, order 2 vector fields.  alpha <= 0 measures the
/// plain sup-norm constant (the one used for flush calibration).
double measure_extension_norm(const GridSpec& g, int order, int m, double alpha);

}  // namespace mhdctrl
