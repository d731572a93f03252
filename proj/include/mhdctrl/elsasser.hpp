/// @file elsasser.hpp
/// @brief Elsasser transform, the coupling terms of the curled system, the
///        harmonic induction corrector q, and pressure recovery.

#pragma once

#include "mhdctrl/ops.hpp"
#include "mhdctrl/solvers.hpp"

namespace mhdctrl {

struct ElsasserState {
    VectorField z_plus, z_minus;
    double mu = 1.0;
};

/// z+- = u +- sqrt(mu) H.
ElsasserState to_elsasser(const VectorField& u, const VectorField& H, double mu);

/// u = (z+ + z-)/2, H = (z+ - z-)/(2 sqrt(mu)).
void from_elsasser(const ElsasserState& s, VectorField& u, VectorField& H);

/// Extended coupling term of the structured representation: the self field
/// is z+ for G+ (then other = z-) and z- for G-.  The return slice supplies
/// the y* derivatives; when self == y* or self == other the result vanishes
/// node-exactly.
ScalarField coupling_G(const VectorField& z_self, const VectorField& z_other,
                       const VectorField& ystar_slice);

/// The unstructured coupling term (valid for divergence-free pairs).
ScalarField coupling_g_unstructured(const VectorField& z_self, const VectorField& z_other);

/// Harmonic corrector: Laplace(q) = 0 in Omega, dn q = -sign(n1) (dt H1 +
/// (u.grad)H1 - (H.grad)u1) on Gamma0, dn q = 0 on the walls; q zero-mean.
/// The Gamma0 data is projected to zero mean; a pre-projection mean above
/// 10x the discretization tolerance is a compatibility error.
ScalarField q_corrector(const VectorField& u, const VectorField& H, const VectorField& dtH,
                        double compat_tol);

struct PressureRecovery {
    ScalarSeries p_plus, p_minus, p, q;
    std::vector<double> helmholtz_defect;  // max |r - grad p| per slice
};

/// Per-slice Neumann solves of Laplace(p+-) = div(r+-), dn p+- = r+- . n with
/// r+- = -dt z+- - (z-+ . grad) z+-; then p = (p+ + p-)/2 and
/// q = (p+ - p-)/(2 sqrt(mu)), all zero-mean on Omega.
PressureRecovery recover_pressures(const VectorSeries& z_plus, const VectorSeries& z_minus,
                                   double mu);

/// Time derivative of a series at slice k: centred inside, one-sided second
/// order at the ends.
VectorField time_derivative(const VectorSeries& s, int k);

/// q_corrector applied slice by slice to a (u, H) trajectory.
ScalarSeries q_corrector_series(const VectorSeries& u, const VectorSeries& H, double compat_tol);

}  // namespace mhdctrl
