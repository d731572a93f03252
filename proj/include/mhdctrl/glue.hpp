/// @file glue.hpp
/// @brief Global exact control on [0,T]: two local null-control runs glued
///        by scaling, zero padding and time reversal.

#pragma once

#include "mhdctrl/controller.hpp"

namespace mhdctrl {

struct ControlTrajectory {
    GridSpec grid;
    double T = 1.0, eps = 0.0, mu = 1.0;
    std::vector<double> times;
    VectorSeries u, H;   // values on the Omega box (zeros outside)
    ScalarSeries p, q;   // zero-mean per slice on Omega
};

/// (u,H) -> (-u(T-t), -H(T-t)), pressures time-reflected; exact involution.
ControlTrajectory time_reverse(const ControlTrajectory& traj);

struct GlueReport {
    double eps = 0.0;
    int eps_halvings = 0;
    IterationReport leg_a, leg_b;
    double snap_a = 0.0, snap_b = 0.0;  // terminal field magnitude removed per leg
    double final_mismatch = 0.0;        // ||u(.,T)-uT||inf + ||H(.,T)-HT||inf
    double initial_mismatch = 0.0;
    bool second_leg_zero = false;
};

/// Runs the controller from (eps u0, eps H0) and (-eps uT, -eps HT), rescales
/// by the inverse factors, pads with rest states and reverses the second leg.
/// eps starts at min(T/4, eps_cap) and is halved (at most 10 times) until
/// both legs contract.
ControlTrajectory assemble_global(const GridSpec& g, const ControllerConfig& cfg,
                                  const VectorField& u0, const VectorField& H0,
                                  const VectorField& uT, const VectorField& HT, double T,
                                  GlueReport* rep = nullptr, double eps_cap = 0.25,
                                  int pad_slices = 8);

struct ControlTraces {
    std::vector<double> times;
    // per slice, per column of Gamma0 (left wall then right wall): z+-.n
    std::vector<std::vector<double>> zp_dot_n, zm_dot_n;
    std::vector<double> net_flux_plus, net_flux_minus;
    // full vectors recorded on the inflow sets of the other family
    std::vector<std::vector<double>> zp_inflow_x, zp_inflow_y;  // where zm.n < 0
    std::vector<std::vector<double>> zm_inflow_x, zm_inflow_y;  // where zp.n < 0
    double max_net_flux = 0.0;
    double flux_tol = 0.0;
    bool flux_ok = true;
};

/// Samples the implicit boundary controls on Gamma0 and verifies the
/// zero-net-flux constraint by quadrature (tolerance C*h).
ControlTraces extract_controls(const ControlTrajectory& traj);

}  // namespace mhdctrl
