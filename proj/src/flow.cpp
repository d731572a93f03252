#include "mhdctrl/flow.hpp"

#include <cmath>

namespace mhdctrl {

namespace {

/// Clamps into closure(Omega3) and returns the clamp displacement; a single
/// overshoot beyond h, or clamping that accumulates past h along one
/// trajectory, signals a non-tangent advecting field.
double clamp_point(const GridSpec& g, double& x, double& y) {
    const Rect o3 = g.dom.omega3();
    const double tol = g.hmax();
    if (x < o3.xa - tol || x > o3.xb + tol || y < o3.ya - tol || y > o3.yb + tol)
        throw numerical_error("flow: trajectory left closure(Omega3) by more than h");
    double cx = std::min(std::max(x, o3.xa), o3.xb);
    double cy = std::min(std::max(y, o3.ya), o3.yb);
    double moved = std::hypot(cx - x, cy - y);
    x = cx;
    y = cy;
    return moved;
}

}  // namespace

FlowMap FlowMap::from_series(const VectorSeries* z, double dt_flow) {
    FlowMap m;
    m.series_ = z;
    m.g_ = &z->front().grid();
    m.dt_flow_ = dt_flow;
    return m;
}

FlowMap FlowMap::from_combo(const ComboField* f, const GridSpec& g, double dt_flow) {
    FlowMap m;
    m.combo_ = f;
    m.g_ = &g;
    m.dt_flow_ = dt_flow;
    return m;
}

void FlowMap::eval_field(double x, double y, double t, double& vx, double& vy) const {
    if (combo_) {
        combo_->eval(x, y, t, vx, vy);
        return;
    }
    const GridSpec& g = *g_;
    double s = t / g.dt;
    int k = int(s);
    if (k < 0) k = 0;
    if (k >= g.nt) k = g.nt - 1;
    double th = s - k;
    double ax, ay, bx, by;
    (*series_)[k].sample(x, y, ax, ay);
    (*series_)[k + 1].sample(x, y, bx, by);
    vx = (1 - th) * ax + th * bx;
    vy = (1 - th) * ay + th * by;
}

Point FlowMap::integrate(Point p, double s, double t) const {
    if (s == t) return p;
    const int nsub = std::max(1, int(std::ceil(std::abs(t - s) / dt_flow_ - 1e-12)));
    const double h = (t - s) / nsub;
    double x = p.x, y = p.y;
    double clamped = clamp_point(*g_, x, y);
    for (int i = 0; i < nsub; ++i) {
        const double ta = s + i * h;
        double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
        eval_field(x, y, ta, k1x, k1y);
        eval_field(x + 0.5 * h * k1x, y + 0.5 * h * k1y, ta + 0.5 * h, k2x, k2y);
        eval_field(x + 0.5 * h * k2x, y + 0.5 * h * k2y, ta + 0.5 * h, k3x, k3y);
        eval_field(x + h * k3x, y + h * k3y, ta + h, k4x, k4y);
        x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        clamped += clamp_point(*g_, x, y);
        if (clamped > g_->hmax())
            throw numerical_error("flow: accumulated boundary overshoot beyond h");
    }
    return {x, y};
}

void FlowMap::integrate_ensemble(std::vector<Point>& pts, double s, double t) const {
    for (Point& p : pts) p = integrate(p, s, t);
}

FlushReport flush_check(const FlowMap& map, const DomainSpec& dom) {
    const GridSpec& g = map.grid();
    const IndexBox b2 = g.box_omega2();
    std::vector<Point> seeds;
    seeds.reserve(std::size_t(b2.ni()) * b2.nj());
    for (int j = b2.j0; j <= b2.j1; ++j)
        for (int i = b2.i0; i <= b2.i1; ++i) seeds.push_back({g.x_of(i), g.y_of(j)});
    map.integrate_ensemble(seeds, 0.0, 1.0);
    const Rect o2 = dom.omega2();
    FlushReport rep;
    rep.seeds = int(seeds.size());
    rep.ok = true;
    rep.margin = 1e300;
    for (const Point& p : seeds) {
        if (o2.contains(p.x, p.y)) rep.ok = false;
        rep.margin = std::min(rep.margin, p.x - (dom.L + dom.l));
    }
    return rep;
}

FlushReport flush_check_series(const VectorSeries& z, const DomainSpec& dom) {
    const GridSpec& g = z.front().grid();
    const IndexBox b2 = g.box_omega2();
    std::vector<Point> seeds;
    seeds.reserve(std::size_t(b2.ni()) * b2.nj());
    for (int j = b2.j0; j <= b2.j1; ++j)
        for (int i = b2.i0; i <= b2.i1; ++i) seeds.push_back({g.x_of(i), g.y_of(j)});
    StepSampler sampler;
    for (int k = 0; k < g.nt; ++k) {
        sampler.prepare(g, z, k);
        rk4_step_ensemble(g, sampler, /*backward=*/false, g.dt, seeds);
    }
    const Rect o2 = dom.omega2();
    FlushReport rep;
    rep.seeds = int(seeds.size());
    rep.ok = true;
    rep.margin = 1e300;
    for (const Point& p : seeds) {
        if (o2.contains(p.x, p.y)) rep.ok = false;
        rep.margin = std::min(rep.margin, p.x - (dom.L + dom.l));
    }
    return rep;
}

double choose_M(const DomainSpec& dom, const GridSpec& g) {
    double M = choose_M_initial(dom);
    for (int attempt = 0; attempt <= 8; ++attempt) {
        ReturnProfile prof = ReturnProfile::make(dom, M);
        ComboField field(prof);
        FlowMap map = FlowMap::from_combo(&field, g, g.dt / 4.0);
        if (flush_check(map, dom).ok) return M;
        M *= 2.0;
    }
    throw config_error("choose_M: flushing oracle failed after 8 doublings");
}

OriginSets origin_sets(const FlowMap& map_plus, const FlowMap& map_minus, const GridSpec& g,
                       double safety_pad) {
    const IndexBox b1 = g.box_omega1();
    std::vector<Point> seeds;
    seeds.reserve(std::size_t(b1.ni()) * b1.nj());
    for (int j = b1.j0; j <= b1.j1; ++j)
        for (int i = b1.i0; i <= b1.i1; ++i) seeds.push_back({g.x_of(i), g.y_of(j)});

    OriginSets os;
    os.o_plus = seeds;
    map_plus.integrate_ensemble(os.o_plus, 1.0, 0.0);
    os.o_minus = seeds;
    map_minus.integrate_ensemble(os.o_minus, 1.0, 0.0);

    double xa = 1e300, xb = -1e300, ya = 1e300, yb = -1e300;
    for (const auto* set : {&os.o_plus, &os.o_minus}) {
        for (const Point& p : *set) {
            xa = std::min(xa, p.x);
            xb = std::max(xb, p.x);
            ya = std::min(ya, p.y);
            yb = std::max(yb, p.y);
        }
    }
    const Rect o2 = g.dom.omega2();
    const double gap = o2.xa - xb;  // flushing drives origins left of Omega2
    if (gap <= 0.0)
        throw numerical_error("origin_sets: origins reach closure(Omega2); increase M or shrink nu");
    const double pad = std::min(2.0 * g.hmax() + safety_pad, 0.4 * gap);
    os.hull = Rect{xa - pad, xb + pad, ya - pad, yb + pad};
    os.dist_to_omega2 = o2.xa - os.hull.xb;

    os.chi_tilde_edge = os.hull.xb;
    os.chi_tilde_width = 0.9 * os.dist_to_omega2;
    return os;
}

void StepSampler::prepare(const GridSpec& g, const VectorSeries& z, int k) {
    if (!ready_) {
        for (auto& s : stage_) s = VectorField(g);
        ready_ = true;
    }
    const VectorField& a = z[k];
    const VectorField& b = z[k + 1];
    for (int s = 0; s <= 8; ++s) blend_into(a, b, s / 8.0, stage_[s]);
}

void rk4_step_ensemble(const GridSpec& g, const StepSampler& f, bool backward, double dt,
                       std::vector<Point>& pts, std::array<std::vector<Point>, 5>* endpoints) {
    const double h = (backward ? -dt : dt) / 4.0;
    if (endpoints) (*endpoints)[0] = pts;
    for (int sub = 0; sub < 4; ++sub) {
        const int s0 = backward ? 8 - 2 * sub : 2 * sub;
        const int sm = backward ? s0 - 1 : s0 + 1;
        const int s1 = backward ? s0 - 2 : s0 + 2;
        for (Point& p : pts) {
            double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
            f.eval(s0, p.x, p.y, k1x, k1y);
            f.eval(sm, p.x + 0.5 * h * k1x, p.y + 0.5 * h * k1y, k2x, k2y);
            f.eval(sm, p.x + 0.5 * h * k2x, p.y + 0.5 * h * k2y, k3x, k3y);
            f.eval(s1, p.x + h * k3x, p.y + h * k3y, k4x, k4y);
            p.x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
            p.y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
            clamp_point(g, p.x, p.y);
        }
        if (endpoints) (*endpoints)[sub + 1] = pts;
    }
}

}  // namespace mhdctrl
