/// @file flow.hpp
/// @brief Characteristic flow maps Z(x,s,t) of extended advecting fields,
///        flushing verification, and origin sets for the data extension.
///
/// Advecting fields come in two backings: the analytic return family
/// (gamma(t) chi(x) e1 plus optional drag and perturbation terms, used for
/// the flushing lemmas) and time-indexed grid series (used inside the fixed
/// point map).  Both vanish near the Omega3 boundary, so trajectories stay
/// inside; a small clamp tolerance absorbs the discrete residue.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mhdctrl/field.hpp"
#include "mhdctrl/geometry.hpp"
#include "mhdctrl/ops.hpp"

namespace mhdctrl {

struct Point {
    double x = 0, y = 0;
};

/// Return-family advecting field:
///   v(x,t) = gamma(t) chi(x) e1  -  drag * cut(x) e1  +  amp * pert(x).
/// chi and cut are evaluated analytically; pert is a grid field sampled
/// bicubically (constant in time).
class ComboField {
public:
    explicit ComboField(const ReturnProfile& p) : prof_(p) {}

    ComboField& with_drag(double a, const ExtensionOp* ext) {
        drag_ = a;
        ext_ = ext;
        return *this;
    }
    ComboField& with_perturbation(const VectorField* pert, double amp) {
        pert_ = pert;
        amp_ = amp;
        return *this;
    }

    const ReturnProfile& profile() const { return prof_; }

    void eval(double x, double y, double t, double& vx, double& vy) const {
        vx = prof_.gamma(t) * prof_.chi(x, y);
        vy = 0.0;
        if (drag_ != 0.0) vx -= drag_ * ext_->cutoff_at(x, y);
        if (pert_) {
            double px, py;
            pert_->sample(x, y, px, py);
            vx += amp_ * px;
            vy += amp_ * py;
        }
    }

private:
    ReturnProfile prof_;
    double drag_ = 0.0;
    const ExtensionOp* ext_ = nullptr;
    const VectorField* pert_ = nullptr;
    double amp_ = 0.0;
};

/// Flow map of an advecting field; classical one-step 4th order integration
/// with substep dt_flow and clamped evaluation near the Omega3 boundary.
class FlowMap {
public:
    static FlowMap from_series(const VectorSeries* z, double dt_flow);
    static FlowMap from_combo(const ComboField* f, const GridSpec& g, double dt_flow);

    const GridSpec& grid() const { return *g_; }
    double dt_flow() const { return dt_flow_; }
    bool is_series() const { return series_ != nullptr; }
    const VectorSeries* series() const { return series_; }
    const ComboField* combo() const { return combo_; }

    /// Z(x,s,t): integrates from time s to time t (forward or backward).
    Point integrate(Point p, double s, double t) const;

    /// Lockstep integration of many seeds from s to t.
    void integrate_ensemble(std::vector<Point>& pts, double s, double t) const;

    void eval_field(double x, double y, double t, double& vx, double& vy) const;

private:
    const GridSpec* g_ = nullptr;
    const VectorSeries* series_ = nullptr;
    const ComboField* combo_ = nullptr;
    double dt_flow_ = 0;
};

struct FlushReport {
    bool ok = false;
    double margin = 0.0;  // min over seeds of theta(Z(x,0,1)) - (L+l)
    int seeds = 0;
};

/// Integrates every grid seed of closure(Omega2) from t=0 to t=1 and checks
/// that all endpoints left closure(Omega2).
FlushReport flush_check(const FlowMap& map, const DomainSpec& dom);

/// Same check for a time-indexed advecting field, using the step-aligned
/// ensemble fast path.
FlushReport flush_check_series(const VectorSeries& z, const DomainSpec& dom);

/// The plateau speed: starts at 2.5*(L+2l) and doubles (at most 8 times)
/// until the flushing oracle passes.
double choose_M(const DomainSpec& dom, const GridSpec& g);

struct OriginSets {
    std::vector<Point> o_plus, o_minus;  // backward images of the Omega1 grid
    Rect hull;                           // bounding box inflated by 2h
    double dist_to_omega2 = 0.0;
    double chi_tilde_edge = 0.0;   // plateau ends at this x
    double chi_tilde_width = 0.0;  // smooth decay width towards Omega2
};

/// Backward images O+- = Z^{-+}(Omega1 grid, 1, 0), their hull, and the
/// cutoff chi_tilde (1 on the hull, 0 on Omega2).  Fails if the hull meets
/// closure(Omega2).
OriginSets origin_sets(const FlowMap& map_plus, const FlowMap& map_minus, const GridSpec& g,
                       double safety_pad = 0.0);

inline double chi_tilde_eval(const OriginSets& os, double x) {
    if (x <= os.chi_tilde_edge) return 1.0;
    return smooth_step((os.chi_tilde_edge + os.chi_tilde_width - x) / os.chi_tilde_width);
}

/// One controller step [t_k, t_k + dt] resolved into 4 flow substeps; the
/// prepared stage fields sit at the 9 dyadic times t_k + s*dt/8.
class StepSampler {
public:
    void prepare(const GridSpec& g, const VectorSeries& z, int k);
    void eval(int slot, double x, double y, double& vx, double& vy) const {
        stage_[slot].sample(x, y, vx, vy);
    }

private:
    std::array<VectorField, 9> stage_;
    bool ready_ = false;
};

/// One RK4 substep ladder across a controller step for an ensemble, with the
/// per-substep endpoints reported through `endpoints` (5 rows: positions at
/// t_k + i*dt/4 when forward, t_{k+1} - i*dt/4 when backward).
void rk4_step_ensemble(const GridSpec& g, const StepSampler& f, bool backward, double dt,
                       std::vector<Point>& pts,
                       std::array<std::vector<Point>, 5>* endpoints = nullptr);

}  // namespace mhdctrl
