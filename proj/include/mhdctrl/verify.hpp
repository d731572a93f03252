/// @file verify.hpp
/// @brief Post-hoc residual and estimate verification: transport/MHD PDE
///        residuals, the uniqueness energy inequality, the transport growth
///        estimate, and the composition-norm bound.

#pragma once

#include "mhdctrl/glue.hpp"

namespace mhdctrl {

struct ResidualReport {
    std::vector<double> per_slice;
    double max = 0.0;
    double scale = 0.0;  // largest single-term magnitude entering the equation
    double tol = 0.0;
    bool pass = false;
};

/// Curled-system residual dt j + (z . grad) j - g on the Omega interior,
/// with j = curl(z) and g the divergence-free coupling form.
ResidualReport residual_curled(const VectorSeries& z_plus, const VectorSeries& z_minus,
                               double tol_factor = 50.0);

struct MhdResiduals {
    ResidualReport momentum;   // dt u + (u.grad)u - mu (H.grad)H + grad p
    ResidualReport induction;  // dt H + (u.grad)H - (H.grad)u + grad q
};
MhdResiduals residual_mhd(const ControlTrajectory& traj, double tol_factor = 50.0);

struct EnergyCheck {
    std::vector<double> e, envelope;
    double constant = 0.0;   // 2 max sup C1-norm of the second trajectory
    double min_slack = 0.0;  // min_t (envelope - e)
    double max_envelope = 0.0;
    bool pass = false;  // min_slack >= -5% of max envelope
};

/// Discrete surrogate of the L2 uniqueness estimate for two trajectories
/// with the same data.
EnergyCheck uniqueness_energy_check(const VectorSeries& z1_plus, const VectorSeries& z1_minus,
                                    const VectorSeries& z2_plus, const VectorSeries& z2_minus);

struct TransportEstimateCheck {
    std::vector<double> times, lhs, rhs;
    double min_slack = 0.0;
    bool pass = false;
};

/// ||v(t)||_{0,a} <= (int ||g||_{0,a} + ||v0||_{0,a}) exp(a int ||z||_{1,a})
/// sampled at 8 times, norms over Omega3.
TransportEstimateCheck transport_estimate_check(const ScalarSeries& v, const VectorSeries& z,
                                                const ScalarSeries& g, double alpha);

struct CompositionCheck {
    double lhs = 0.0, rhs = 0.0, grad_bound = 0.0;
    bool pass = false;
};

/// ||G(Z(.,0,sigma),sigma)||_{0,a} <= (1 + max|grad Z|^a) ||G(.,sigma)||_{0,a}
/// with Z the flow of the advecting series up to slice k_sigma.
CompositionCheck composition_estimate_check(const VectorSeries& advect, const ScalarSeries& G,
                                            int k_sigma, double alpha);

/// Smooth localized bump added to one slice; the standard negative control.
void corrupt_slice(VectorField& slice, double amplitude);

}  // namespace mhdctrl
