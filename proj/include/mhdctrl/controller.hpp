/// @file controller.hpp
/// @brief The six-step fixed point map F, the weighted-neighbourhood
///        membership diagnostics, and the Picard iteration realizing local
///        null controllability on [0,1].

#pragma once

#include <cstdint>
#include <memory>

#include "mhdctrl/data.hpp"
#include "mhdctrl/elsasser.hpp"

namespace mhdctrl {

struct ControllerConfig {
    double mu = 1.0;
    int mtilde = 3;
    double alpha = 0.5;
    double k_weight = 8.0;  // doubled up to k_max on contraction failure
    double k_max = 64.0;
    double tol_X = 1e-8;
    int max_iter = 40;
    double lambda_d = 0.1;
    double M_override = 0.0;  // 0: use the flushing oracle
    int nu_bisection_steps = 8;
    std::uint64_t seed = 1234;
    bool record_flush = true;       // per-iterate flush margins (costs one forward sweep)
    bool record_membership = true;  // per-iterate weighted norms
    bool enforce_delta = true;      // reject data above delta(k); contraction
                                    // studies may probe beyond the calibrated
                                    // threshold and report what they observe
};

/// Fixed objects of a controller run: geometry, profiles, extension, the
/// calibrated smallness constants, and the iterate-independent cutoff
/// chi_tilde derived from worst-case flushing flows.
struct ControllerSetup {
    GridSpec grid;
    ControllerConfig cfg;
    ReturnProfile prof;
    std::shared_ptr<ExtensionOp> ext;
    std::shared_ptr<DirichletPoisson> poisson1;  // Dirichlet solve on Omega1
    ScalarField chi_field;                       // chi sampled on the grid
    double M = 0.0;
    double C_pi = 1.0;
    double nu_est = 0.0;
    double delta = 0.0;       // admissible data threshold nu/(4 C_pi 2^k)
    OriginSets origins;       // hull and chi_tilde parameters
    ScalarField chi_tilde;    // sampled cutoff
    double unperturbed_flush_margin = 0.0;

    VectorField ystar_slice(double t) const {
        VectorField v(grid);
        v.x() = chi_field;
        v.x() *= prof.gamma(t);
        return v;
    }
};

/// Geometry calibration: chooses M, measures C_pi, bisects nu against the
/// worst-case drag, and freezes chi_tilde.
ControllerSetup setup_controller(const GridSpec& g, const ControllerConfig& cfg);

/// Largest nu in an 8-step bisection over (0, M/4] such that flushing holds
/// for y* dragged by nu*C_pi against the x-drift on the extension support.
double calibrate_nu(const GridSpec& g, const ReturnProfile& prof, const ExtensionOp& ext,
                    double C_pi, int steps);

struct IterationRecord {
    int iter = 0;
    double d_X = 0.0;
    double ratio = 0.0;
    double max_weighted_norm = 0.0;
    double flush_margin = 0.0;
};

struct IterationReport {
    std::vector<IterationRecord> records;
    bool converged = false;
    double kappa_fit = 0.0;      // max consecutive ratio over the fit window
    double k_weight = 0.0;
    double nu_est = 0.0, C_pi = 0.0, delta = 0.0;
    double data_norm = 0.0;
    double cancel_j = 0.0, cancel_z = 0.0, cancel_tol = 0.0;
};

struct FixedPointState {
    int iter = 0;
    VectorSeries z_plus, z_minus;  // extended trajectories (restriction to Omega is the iterate)
    ScalarSeries j_plus, j_minus;  // transported vorticities of the last application
};

struct ApplyDiagnostics {
    double cancel_j = 0.0, cancel_z = 0.0;
    double flush_margin = 0.0;  // min over both advecting fields (if recorded)
};

/// One application of F: extension, crossed flow maps, coupling terms,
/// extended data, crossed transport, div-curl reconstruction, restriction.
void apply_F(const ControllerSetup& s, const VectorSeries& zbar_plus,
             const VectorSeries& zbar_minus, const VectorField& z0_plus,
             const VectorField& z0_minus, FixedPointState& out, ApplyDiagnostics* diag = nullptr);

/// The extension z# = y* + pi2(z - ybar) applied slice by slice.
VectorSeries extend_to_omega3(const ControllerSetup& s, const VectorSeries& z);

/// Seed iterate (ybar + lambda z0) in extended form.
VectorSeries seed_iterate(const ControllerSetup& s, const VectorField& z0);

/// Weighted norm max_t omega_k(t) ||z - ybar||_{m,alpha,Omega}(t) plus the
/// uniform bound of the neighbourhood definition.
struct MembershipReport {
    double max_weighted = 0.0;
    double max_plain = 0.0;  // max_t ||z||_{mtilde,alpha,Omega}
    double uniform_bound = 0.0;
    bool inside = false;
};
MembershipReport membership_check(const ControllerSetup& s, const VectorSeries& z_plus,
                                  const VectorSeries& z_minus);

/// X-norm distance max_t (||dz+||_{1,alpha,Omega} + ||dz-||_{1,alpha,Omega}).
double x_norm_distance(const ControllerSetup& s, const VectorSeries& ap, const VectorSeries& am,
                       const VectorSeries& bp, const VectorSeries& bm);

/// Picard iteration of F from the seed (ybar + lambda z0+, ybar + lambda z0-),
/// doubling the weight exponent on contraction failure.
FixedPointState iterate_to_fixed_point(ControllerSetup& s, const VectorField& z0_plus,
                                       const VectorField& z0_minus, IterationReport& rep);

/// cancel_tol = 10 (h^2 + dt^2) * trajectory scale.
double cancellation_tolerance(const ControllerSetup& s, double traj_scale);

}  // namespace mhdctrl
