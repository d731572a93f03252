#include "mhdctrl/glue.hpp"

#include <cmath>

namespace mhdctrl {

ControlTrajectory time_reverse(const ControlTrajectory& traj) {
    ControlTrajectory out;
    out.grid = traj.grid;
    out.T = traj.T;
    out.eps = traj.eps;
    out.mu = traj.mu;
    const std::size_t n = traj.times.size();
    out.times.resize(n);
    out.u.resize(n);
    out.H.resize(n);
    out.p.resize(n);
    out.q.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t r = n - 1 - k;
        out.times[k] = traj.T - traj.times[r];
        out.u[k] = traj.u[r];
        out.u[k] *= -1.0;
        out.H[k] = traj.H[r];
        out.H[k] *= -1.0;
        out.p[k] = traj.p[r];
        out.q[k] = traj.q[r];
    }
    return out;
}

namespace {

VectorField combine(const VectorField& a, double ca, const VectorField& b, double cb) {
    VectorField out = a;
    out *= ca;
    VectorField t = b;
    t *= cb;
    out += t;
    return out;
}

struct Leg {
    VectorSeries u, H;
    ScalarSeries p, q;
    IterationReport rep;
    double snap = 0.0;
};

Leg run_leg(ControllerSetup& setup, const VectorField& z0p, const VectorField& z0m, double mu) {
    Leg leg;
    FixedPointState st = iterate_to_fixed_point(setup, z0p, z0m, leg.rep);
    const GridSpec& g = setup.grid;
    const int nt = g.nt;
    PressureRecovery pr = recover_pressures(st.z_plus, st.z_minus, mu);
    leg.u.resize(nt + 1);
    leg.H.resize(nt + 1);
    const double rmu = std::sqrt(mu);
    for (int k = 0; k <= nt; ++k) {
        leg.u[k] = combine(st.z_plus[k], 0.5, st.z_minus[k], 0.5);
        leg.H[k] = combine(st.z_plus[k], 0.5 / rmu, st.z_minus[k], -0.5 / rmu);
    }
    leg.p = std::move(pr.p);
    leg.q = std::move(pr.q);
    // the paper sets the terminal state and pressure constants to zero; record
    // the discrete defect removed by that modification
    leg.snap = std::max(leg.u[nt].max_abs(), leg.H[nt].max_abs());
    leg.u[nt] = VectorField(g);
    leg.H[nt] = VectorField(g);
    leg.p[nt] = ScalarField(g);
    leg.q[nt] = ScalarField(g);
    return leg;
}

}  // namespace

ControlTrajectory assemble_global(const GridSpec& g, const ControllerConfig& cfg,
                                  const VectorField& u0, const VectorField& H0,
                                  const VectorField& uT, const VectorField& HT, double T,
                                  GlueReport* rep, double eps_cap, int pad_slices) {
    if (!(T > 0.0)) throw std::invalid_argument("assemble_global: T must be positive");
    const double rmu = std::sqrt(cfg.mu);
    GlueReport local;
    GlueReport& R = rep ? *rep : local;

    const bool second_zero = uT.max_abs() == 0.0 && HT.max_abs() == 0.0;
    R.second_leg_zero = second_zero;

    ControllerSetup setup = setup_controller(g, cfg);
    double eps = std::min(0.25 * T, eps_cap);
    Leg legA, legB;
    bool done = false;
    for (int attempt = 0; attempt <= 10 && !done; ++attempt, eps *= 0.5) {
        try {
            setup.cfg.k_weight = cfg.k_weight;
            VectorField z0p = combine(u0, eps, H0, eps * rmu);
            VectorField z0m = combine(u0, eps, H0, -eps * rmu);
            legA = run_leg(setup, z0p, z0m, cfg.mu);
            if (!second_zero) {
                setup.cfg.k_weight = cfg.k_weight;
                VectorField w0p = combine(uT, -eps, HT, -eps * rmu);
                VectorField w0m = combine(uT, -eps, HT, eps * rmu);
                legB = run_leg(setup, w0p, w0m, cfg.mu);
            }
            done = true;
            R.eps = eps;
            R.eps_halvings = attempt;
        } catch (const config_error&) {
            if (attempt == 10) throw;
        } catch (const numerical_error&) {
            if (attempt == 10) throw;
        }
    }
    R.leg_a = legA.rep;
    R.leg_b = legB.rep;
    R.snap_a = legA.snap;
    R.snap_b = legB.snap;

    const int nt = g.nt;
    ControlTrajectory traj;
    traj.grid = g;
    traj.T = T;
    traj.eps = R.eps;
    traj.mu = cfg.mu;
    eps = R.eps;

    auto push_slice = [&](double t, const VectorField& u, const VectorField& H,
                          const ScalarField& p, const ScalarField& q) {
        traj.times.push_back(t);
        traj.u.push_back(u);
        traj.H.push_back(H);
        traj.p.push_back(p);
        traj.q.push_back(q);
    };

    const double ie = 1.0 / eps, ie2 = ie * ie;
    // first leg: (eps^-1 u*, eps^-1 H*, eps^-2 p*, eps^-2 q*)(x, t/eps) on [0, eps]
    for (int k = 0; k <= nt; ++k) {
        VectorField u = legA.u[k];
        u *= ie;
        VectorField H = legA.H[k];
        H *= ie;
        ScalarField p = legA.p[k];
        p *= ie2;
        ScalarField q = legA.q[k];
        q *= ie2;
        push_slice(eps * g.t_of(k), u, H, p, q);
    }
    // rest state on (eps, T-eps), coarse grid through T/2
    {
        VectorField zu(g), zH(g);
        ScalarField zp(g), zq(g);
        const double a = eps, b = T - eps;
        for (int i = 1; i <= pad_slices; ++i)
            push_slice(a + (b - a) * i / (pad_slices + 1.0), zu, zH, zp, zq);
    }
    // second leg, reversed onto [T-eps, T]
    for (int k = 0; k <= nt; ++k) {
        const double t = T - eps + eps * g.t_of(k);
        if (second_zero) {
            push_slice(t, VectorField(g), VectorField(g), ScalarField(g), ScalarField(g));
        } else {
            VectorField u = legB.u[nt - k];
            u *= -ie;
            VectorField H = legB.H[nt - k];
            H *= -ie;
            ScalarField p = legB.p[nt - k];
            p *= ie2;
            ScalarField q = legB.q[nt - k];
            q *= ie2;
            push_slice(t, u, H, p, q);
        }
    }

    const IndexBox bO = g.box_omega();
    double mism = 0.0, mism0 = 0.0;
    for (int j = bO.j0; j <= bO.j1; ++j)
        for (int i = bO.i0; i <= bO.i1; ++i) {
            mism = std::max(mism, std::abs(traj.u.back().x().at(i, j) - uT.x().at(i, j)) +
                                      std::abs(traj.H.back().x().at(i, j) - HT.x().at(i, j)));
            mism = std::max(mism, std::abs(traj.u.back().y().at(i, j) - uT.y().at(i, j)) +
                                      std::abs(traj.H.back().y().at(i, j) - HT.y().at(i, j)));
            mism0 = std::max(mism0, std::abs(traj.u.front().x().at(i, j) - u0.x().at(i, j)) +
                                        std::abs(traj.H.front().x().at(i, j) - H0.x().at(i, j)));
            mism0 = std::max(mism0, std::abs(traj.u.front().y().at(i, j) - u0.y().at(i, j)) +
                                        std::abs(traj.H.front().y().at(i, j) - H0.y().at(i, j)));
        }
    R.final_mismatch = mism;
    R.initial_mismatch = mism0;
    return traj;
}

ControlTraces extract_controls(const ControlTrajectory& traj) {
    const GridSpec& g = traj.grid;
    const IndexBox b = g.box_omega();
    const double rmu = std::sqrt(traj.mu);
    ControlTraces tr;
    tr.times = traj.times;
    const std::size_t n = traj.times.size();
    tr.zp_dot_n.resize(n);
    tr.zm_dot_n.resize(n);
    tr.zp_inflow_x.resize(n);
    tr.zp_inflow_y.resize(n);
    tr.zm_inflow_x.resize(n);
    tr.zm_inflow_y.resize(n);
    tr.net_flux_plus.resize(n);
    tr.net_flux_minus.resize(n);

    double trace_sup = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        auto& zp_n = tr.zp_dot_n[k];
        auto& zm_n = tr.zm_dot_n[k];
        const int nj = b.nj();
        zp_n.resize(2 * nj);
        zm_n.resize(2 * nj);
        double fp = 0.0, fm = 0.0;
        for (int j = 0; j < nj; ++j) {
            const int jj = b.j0 + j;
            const double w = (j == 0 || j == nj - 1) ? 0.5 : 1.0;
            for (int side = 0; side < 2; ++side) {
                const int ii = side == 0 ? b.i0 : b.i1;
                const double sn = side == 0 ? -1.0 : 1.0;  // n1 on the wall
                double ux = traj.u[k].x().at(ii, jj), uy = traj.u[k].y().at(ii, jj);
                double Hx = traj.H[k].x().at(ii, jj), Hy = traj.H[k].y().at(ii, jj);
                double zpx = ux + rmu * Hx, zpy = uy + rmu * Hy;
                double zmx = ux - rmu * Hx, zmy = uy - rmu * Hy;
                double zpn = sn * zpx, zmn = sn * zmx;
                zp_n[side * nj + j] = zpn;
                zm_n[side * nj + j] = zmn;
                fp += w * zpn * g.hy;
                fm += w * zmn * g.hy;
                trace_sup = std::max({trace_sup, std::abs(zpn), std::abs(zmn)});
                if (zmn < 0.0) {  // inflow of z-, record z+
                    tr.zp_inflow_x[k].push_back(zpx);
                    tr.zp_inflow_y[k].push_back(zpy);
                }
                if (zpn < 0.0) {  // inflow of z+, record z-
                    tr.zm_inflow_x[k].push_back(zmx);
                    tr.zm_inflow_y[k].push_back(zmy);
                }
            }
        }
        tr.net_flux_plus[k] = fp;
        tr.net_flux_minus[k] = fm;
        tr.max_net_flux = std::max({tr.max_net_flux, std::abs(fp), std::abs(fm)});
    }
    tr.flux_tol = 5.0 * g.hmax() * std::max(1.0, trace_sup);
    tr.flux_ok = tr.max_net_flux <= tr.flux_tol;
    return tr;
}

}  // namespace mhdctrl
