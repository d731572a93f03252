#include "mhdctrl/verify.hpp"

#include <cmath>

namespace mhdctrl {

ResidualReport residual_curled(const VectorSeries& z_plus, const VectorSeries& z_minus,
                               double tol_factor) {
    const GridSpec& g = z_plus.front().grid();
    const IndexBox b = g.box_omega();
    const int nt = int(z_plus.size()) - 1;
    ResidualReport rep;
    rep.per_slice.assign(nt + 1, 0.0);

    ScalarSeries jp(nt + 1), jm(nt + 1);
    for (int k = 0; k <= nt; ++k) {
        jp[k] = curl2d_box(z_plus[k], b);
        jm[k] = curl2d_box(z_minus[k], b);
    }
    const double idt = 1.0 / g.dt;
    for (int k = 0; k <= nt; ++k) {
        for (int side = 0; side < 2; ++side) {
            const ScalarSeries& j = side == 0 ? jp : jm;
            const VectorSeries& adv = side == 0 ? z_minus : z_plus;  // crossed
            const VectorSeries& self = side == 0 ? z_plus : z_minus;
            ScalarField gk = coupling_g_unstructured(self[k], adv[k]);
            ScalarField jx(g), jy(g);
            ddx_box(j[k], b, jx);
            ddy_box(j[k], b, jy);
            for (int jj = b.j0 + 1; jj < b.j1; ++jj)
                for (int i = b.i0 + 1; i < b.i1; ++i) {
                    double djdt;
                    if (k == 0)
                        djdt = (-1.5 * j[0].at(i, jj) + 2.0 * j[1].at(i, jj) -
                                0.5 * j[2].at(i, jj)) *
                               idt;
                    else if (k == nt)
                        djdt = (1.5 * j[nt].at(i, jj) - 2.0 * j[nt - 1].at(i, jj) +
                                0.5 * j[nt - 2].at(i, jj)) *
                               idt;
                    else
                        djdt = 0.5 * (j[k + 1].at(i, jj) - j[k - 1].at(i, jj)) * idt;
                    double advect = adv[k].x().at(i, jj) * jx.at(i, jj) +
                                    adv[k].y().at(i, jj) * jy.at(i, jj);
                    double res = djdt + advect - gk.at(i, jj);
                    rep.per_slice[k] = std::max(rep.per_slice[k], std::abs(res));
                    rep.scale = std::max({rep.scale, std::abs(djdt), std::abs(advect),
                                          std::abs(gk.at(i, jj))});
                }
        }
        rep.max = std::max(rep.max, rep.per_slice[k]);
    }
    const double h2 = g.hmax() * g.hmax();
    rep.tol = tol_factor * (h2 + g.dt * g.dt) * std::max(rep.scale, 1e-30);
    rep.pass = rep.max <= rep.tol;
    return rep;
}

namespace {

struct SliceDeriv {
    ScalarField ux_x, ux_y, uy_x, uy_y;
    explicit SliceDeriv(const GridSpec& g)
        : ux_x(g), ux_y(g), uy_x(g), uy_y(g) {}
    void compute(const VectorField& v, const IndexBox& b) {
        ddx_box(v.x(), b, ux_x);
        ddy_box(v.x(), b, ux_y);
        ddx_box(v.y(), b, uy_x);
        ddy_box(v.y(), b, uy_y);
    }
};

double time_diff(const std::vector<double>& times, const std::vector<const ScalarField*>& f,
                 int k, int i, int j) {
    const int n = int(times.size()) - 1;
    if (k == 0) {
        const double h = times[1] - times[0];
        return (f[1]->at(i, j) - f[0]->at(i, j)) / h;
    }
    if (k == n) {
        const double h = times[n] - times[n - 1];
        return (f[n]->at(i, j) - f[n - 1]->at(i, j)) / h;
    }
    const double hm = times[k] - times[k - 1];
    const double hp = times[k + 1] - times[k];
    // second-order nonuniform centred difference
    const double a = -hp / (hm * (hm + hp));
    const double c = hm / (hp * (hm + hp));
    const double bmid = -(a + c);
    return a * f[k - 1]->at(i, j) + bmid * f[k]->at(i, j) + c * f[k + 1]->at(i, j);
}

}  // namespace

MhdResiduals residual_mhd(const ControlTrajectory& traj, double tol_factor) {
    const GridSpec& g = traj.grid;
    const IndexBox b = g.box_omega();
    const int n = int(traj.times.size()) - 1;
    MhdResiduals out;
    out.momentum.per_slice.assign(n + 1, 0.0);
    out.induction.per_slice.assign(n + 1, 0.0);

    std::vector<const ScalarField*> ux(n + 1), uy(n + 1), Hx(n + 1), Hy(n + 1);
    for (int k = 0; k <= n; ++k) {
        ux[k] = &traj.u[k].x();
        uy[k] = &traj.u[k].y();
        Hx[k] = &traj.H[k].x();
        Hy[k] = &traj.H[k].y();
    }

    SliceDeriv du(g), dH(g);
    ScalarField px(g), py(g), qx(g), qy(g);
    for (int k = 0; k <= n; ++k) {
        du.compute(traj.u[k], b);
        dH.compute(traj.H[k], b);
        ddx_box(traj.p[k], b, px);
        ddy_box(traj.p[k], b, py);
        ddx_box(traj.q[k], b, qx);
        ddy_box(traj.q[k], b, qy);
        const VectorField& u = traj.u[k];
        const VectorField& H = traj.H[k];
        for (int jj = b.j0 + 1; jj < b.j1; ++jj)
            for (int i = b.i0 + 1; i < b.i1; ++i) {
                const double uxv = u.x().at(i, jj), uyv = u.y().at(i, jj);
                const double Hxv = H.x().at(i, jj), Hyv = H.y().at(i, jj);
                const double dtux = time_diff(traj.times, ux, k, i, jj);
                const double dtuy = time_diff(traj.times, uy, k, i, jj);
                const double dtHx = time_diff(traj.times, Hx, k, i, jj);
                const double dtHy = time_diff(traj.times, Hy, k, i, jj);

                const double conv_ux = uxv * du.ux_x.at(i, jj) + uyv * du.ux_y.at(i, jj);
                const double conv_uy = uxv * du.uy_x.at(i, jj) + uyv * du.uy_y.at(i, jj);
                const double HgradH_x = Hxv * dH.ux_x.at(i, jj) + Hyv * dH.ux_y.at(i, jj);
                const double HgradH_y = Hxv * dH.uy_x.at(i, jj) + Hyv * dH.uy_y.at(i, jj);
                const double ugradH_x = uxv * dH.ux_x.at(i, jj) + uyv * dH.ux_y.at(i, jj);
                const double ugradH_y = uxv * dH.uy_x.at(i, jj) + uyv * dH.uy_y.at(i, jj);
                const double Hgradu_x = Hxv * du.ux_x.at(i, jj) + Hyv * du.ux_y.at(i, jj);
                const double Hgradu_y = Hxv * du.uy_x.at(i, jj) + Hyv * du.uy_y.at(i, jj);

                const double rm_x = dtux + conv_ux - traj.mu * HgradH_x + px.at(i, jj);
                const double rm_y = dtuy + conv_uy - traj.mu * HgradH_y + py.at(i, jj);
                const double ri_x = dtHx + ugradH_x - Hgradu_x + qx.at(i, jj);
                const double ri_y = dtHy + ugradH_y - Hgradu_y + qy.at(i, jj);

                double m = std::max(std::abs(rm_x), std::abs(rm_y));
                double iv = std::max(std::abs(ri_x), std::abs(ri_y));
                out.momentum.per_slice[k] = std::max(out.momentum.per_slice[k], m);
                out.induction.per_slice[k] = std::max(out.induction.per_slice[k], iv);
                out.momentum.scale = std::max({out.momentum.scale, std::abs(dtux), std::abs(dtuy),
                                               std::abs(conv_ux), std::abs(conv_uy),
                                               std::abs(traj.mu * HgradH_x),
                                               std::abs(traj.mu * HgradH_y),
                                               std::abs(px.at(i, jj)), std::abs(py.at(i, jj))});
                out.induction.scale = std::max({out.induction.scale, std::abs(dtHx),
                                                std::abs(dtHy), std::abs(ugradH_x),
                                                std::abs(ugradH_y), std::abs(Hgradu_x),
                                                std::abs(Hgradu_y), std::abs(qx.at(i, jj)),
                                                std::abs(qy.at(i, jj))});
            }
        out.momentum.max = std::max(out.momentum.max, out.momentum.per_slice[k]);
        out.induction.max = std::max(out.induction.max, out.induction.per_slice[k]);
    }
    // the coarse rest padding contributes dt ~ gap/(pad+1); use the fine step
    double dtmin = 1e300;
    for (std::size_t k = 1; k < traj.times.size(); ++k)
        dtmin = std::min(dtmin, traj.times[k] - traj.times[k - 1]);
    const double h2 = g.hmax() * g.hmax();
    for (ResidualReport* r : {&out.momentum, &out.induction}) {
        r->tol = tol_factor * (h2 + dtmin * dtmin) * std::max(r->scale, 1e-30);
        r->pass = r->max <= r->tol;
    }
    return out;
}

EnergyCheck uniqueness_energy_check(const VectorSeries& z1_plus, const VectorSeries& z1_minus,
                                    const VectorSeries& z2_plus, const VectorSeries& z2_minus) {
    const GridSpec& g = z1_plus.front().grid();
    const IndexBox b = g.box_omega();
    const int nt = int(z1_plus.size()) - 1;
    EnergyCheck ec;
    ec.e.resize(nt + 1);
    ec.envelope.resize(nt + 1);

    double K = 0.0;
    for (int k = 0; k <= nt; ++k) {
        K = std::max(K, holder_norm(z2_plus[k], 1, 0.0, Subdomain::Omega).value);
        K = std::max(K, holder_norm(z2_minus[k], 1, 0.0, Subdomain::Omega).value);
        double e = 0.0;
        for (int jj = b.j0; jj <= b.j1; ++jj)
            for (int i = b.i0; i <= b.i1; ++i) {
                double wx = (i == b.i0 || i == b.i1) ? 0.5 : 1.0;
                double wy = (jj == b.j0 || jj == b.j1) ? 0.5 : 1.0;
                double dpx = z1_plus[k].x().at(i, jj) - z2_plus[k].x().at(i, jj);
                double dpy = z1_plus[k].y().at(i, jj) - z2_plus[k].y().at(i, jj);
                double dmx = z1_minus[k].x().at(i, jj) - z2_minus[k].x().at(i, jj);
                double dmy = z1_minus[k].y().at(i, jj) - z2_minus[k].y().at(i, jj);
                e += wx * wy * (dpx * dpx + dpy * dpy + dmx * dmx + dmy * dmy);
            }
        ec.e[k] = e * g.hx * g.hy;
    }
    ec.constant = 2.0 * K;
    double integral = 0.0;
    ec.envelope[0] = ec.e[0];
    for (int k = 1; k <= nt; ++k) {
        integral += 0.5 * (ec.e[k] + ec.e[k - 1]) * g.dt;
        ec.envelope[k] = ec.e[0] + ec.constant * integral;
    }
    ec.min_slack = 1e300;
    for (int k = 0; k <= nt; ++k) {
        ec.min_slack = std::min(ec.min_slack, ec.envelope[k] - ec.e[k]);
        ec.max_envelope = std::max(ec.max_envelope, ec.envelope[k]);
    }
    ec.pass = ec.min_slack >= -0.05 * ec.max_envelope;
    return ec;
}

TransportEstimateCheck transport_estimate_check(const ScalarSeries& v, const VectorSeries& z,
                                                const ScalarSeries& gsrc, double alpha) {
    const GridSpec& g = v.front().grid();
    const int nt = int(v.size()) - 1;
    TransportEstimateCheck tc;

    std::vector<double> gnorm(nt + 1), znorm(nt + 1);
    for (int k = 0; k <= nt; ++k) {
        gnorm[k] = holder_norm(gsrc[k], 0, alpha, Subdomain::Omega3).value;
        znorm[k] = holder_norm(z[k], 1, alpha, Subdomain::Omega3).value;
    }
    const double v0 = holder_norm(v[0], 0, alpha, Subdomain::Omega3).value;
    std::vector<double> gint(nt + 1, 0.0), zint(nt + 1, 0.0);
    for (int k = 1; k <= nt; ++k) {
        gint[k] = gint[k - 1] + 0.5 * (gnorm[k] + gnorm[k - 1]) * g.dt;
        zint[k] = zint[k - 1] + 0.5 * (znorm[k] + znorm[k - 1]) * g.dt;
    }
    tc.min_slack = 1e300;
    for (int s = 1; s <= 8; ++s) {
        int k = s * nt / 8;
        double lhs = holder_norm(v[k], 0, alpha, Subdomain::Omega3).value;
        double rhs = (gint[k] + v0) * std::exp(alpha * zint[k]);
        tc.times.push_back(g.t_of(k));
        tc.lhs.push_back(lhs);
        tc.rhs.push_back(rhs);
        tc.min_slack = std::min(tc.min_slack, rhs - lhs);
    }
    tc.pass = tc.min_slack >= -1e-9 * std::max(1.0, v0);
    return tc;
}

CompositionCheck composition_estimate_check(const VectorSeries& advect, const ScalarSeries& G,
                                            int k_sigma, double alpha) {
    const GridSpec& g = advect.front().grid();
    CompositionCheck cc;
    std::vector<Point> pts;
    pts.reserve(g.nodes());
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) pts.push_back({g.x_of(i), g.y_of(j)});
    StepSampler sampler;
    for (int k = 0; k < k_sigma; ++k) {
        sampler.prepare(g, advect, k);
        rk4_step_ensemble(g, sampler, /*backward=*/false, g.dt, pts);
    }
    ScalarField w(g);
    {
        std::size_t m = 0;
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i, ++m) w.at(i, j) = G[k_sigma].sample(pts[m].x, pts[m].y);
    }
    // finite-difference gradient bound of the flow map over the seed lattice
    double gmax = 0.0;
    const int npx = g.npx();
    for (int j = 1; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            std::size_t m = std::size_t(j) * npx + i;
            double zxx = (pts[m + 1].x - pts[m - 1].x) / (2 * g.hx);
            double zyx = (pts[m + 1].y - pts[m - 1].y) / (2 * g.hx);
            double zxy = (pts[m + npx].x - pts[m - npx].x) / (2 * g.hy);
            double zyy = (pts[m + npx].y - pts[m - npx].y) / (2 * g.hy);
            gmax = std::max(gmax, std::sqrt(zxx * zxx + zyx * zyx + zxy * zxy + zyy * zyy));
        }
    cc.grad_bound = 1.0 + std::pow(gmax, alpha);
    cc.lhs = holder_norm(w, 0, alpha, Subdomain::Omega3).value;
    cc.rhs = cc.grad_bound * holder_norm(G[k_sigma], 0, alpha, Subdomain::Omega3).value;
    cc.pass = cc.lhs <= cc.rhs * (1.0 + 1e-9);
    return cc;
}

void corrupt_slice(VectorField& slice, double amplitude) {
    const GridSpec& g = slice.grid();
    const Rect om = g.dom.omega();
    const double cx = 0.5 * (om.xa + om.xb), cy = 0.5 * (om.ya + om.yb);
    const double r = 0.2 * std::min(om.width(), om.height());
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            double dx = (g.x_of(i) - cx) / r, dy = (g.y_of(j) - cy) / r;
            double s2 = dx * dx + dy * dy;
            if (s2 < 1.0) {
                double bump = amplitude * std::exp(1.0 - 1.0 / (1.0 - s2));
                slice.x().at(i, j) += bump;
                slice.y().at(i, j) -= 0.5 * bump;
            }
        }
}

}  // namespace mhdctrl
