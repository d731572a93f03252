/// @file solvers.hpp
/// @brief Elliptic and transport kernels: sine-basis Dirichlet Poisson on
///        Omega1, deflated-CG Neumann Poisson on Omega, characteristic
///        (semi-Lagrangian) transport on Omega3, div-curl reconstruction.

#pragma once

#include <memory>

#include "mhdctrl/flow.hpp"

namespace mhdctrl {

/// -Laplace(phi) = rhs on a grid-aligned rectangle with phi = 0 on its
/// boundary, solved by fast diagonalization in the sine basis.
class DirichletPoisson {
public:
    DirichletPoisson(const GridSpec& g, Subdomain sd = Subdomain::Omega1);
    ~DirichletPoisson();
    DirichletPoisson(const DirichletPoisson&) = delete;
    DirichletPoisson& operator=(const DirichletPoisson&) = delete;

    /// Writes phi on the box (zero on its boundary); nodes outside the box
    /// are zeroed.
    void solve(const ScalarField& rhs, ScalarField& phi) const;

    /// Max-norm of rhs - (-Laplace_h phi) over the box interior.
    double residual(const ScalarField& rhs, const ScalarField& phi) const;

    const IndexBox& box() const { return box_; }

private:
    GridSpec g_;
    IndexBox box_;
    int ni_, nj_;  // interior sizes
    std::vector<double> eig_;
    std::vector<double> buf_;
    void* plan_ = nullptr;  // fftw_plan
};

/// Outward normal derivative samples along the four edges of a box.
struct NeumannTrace {
    std::vector<double> left, right, bottom, top;
    static NeumannTrace zeros(const IndexBox& b) {
        NeumannTrace t;
        t.left.assign(b.nj(), 0.0);
        t.right.assign(b.nj(), 0.0);
        t.bottom.assign(b.ni(), 0.0);
        t.top.assign(b.ni(), 0.0);
        return t;
    }
};

/// Laplace(q) = rhs with dn q = trace on a grid-aligned rectangle;
/// second-order ghost-node closure, zero-mean solution by nullspace
/// deflation, conjugate gradients to relative residual `tol`.
class NeumannPoisson {
public:
    NeumannPoisson(const GridSpec& g, Subdomain sd = Subdomain::Omega, double tol = 1e-10);

    /// The compatibility defect (boundary integral of the trace minus volume
    /// integral of rhs) is projected out of the trace before solving; a
    /// defect above 10*compat_tol (relative) is a compatibility error.
    ScalarField solve(const ScalarField& rhs, const NeumannTrace& trace,
                      double compat_tol = 1e250, double* defect_out = nullptr) const;

    const IndexBox& box() const { return box_; }

private:
    GridSpec g_;
    IndexBox box_;
    double tol_;
};

/// Characteristic transport solve of
///     dj/dt + (z . grad) j = G,   j(.,0) = j0   on Omega3,
/// realized as j(x,t) = j0(Z(x,t,0)) + int_0^t G(Z(x,t,s),s) ds with
/// backward flow evaluation (incrementally composed departure maps), bicubic
/// sampling and per-panel composite Simpson quadrature on the controller
/// time grid (flow substep dt/4).
ScalarSeries transport_solve(const ScalarField& j0, const VectorSeries& advect,
                             const ScalarSeries& source);

/// z_tilde = perp_grad(phi) + y* + lambda(t) pi2(z0) on Omega1, where
/// -Laplace(phi) = j - lambda(t) curl(pi2 z0) with phi = 0 on the Omega1
/// boundary.  Fields outside the Omega1 box are zero.
VectorField div_curl_reconstruct(const ScalarField& j, const VectorField& z0, double t,
                                 const ReturnProfile& prof, const GridSpec& g);

/// One Leray-type projection on Omega: removes the gradient part of the
/// divergence and the normal residue on the uncontrolled walls.
void leray_project_omega(VectorField& u);

}  // namespace mhdctrl
