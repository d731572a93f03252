#include "mhdctrl/controller.hpp"

#include <cmath>

namespace mhdctrl {

namespace {

struct BandNodes {
    std::vector<std::size_t> idx;
    std::vector<Point> pos;
};

BandNodes band_nodes(const GridSpec& g, const ScalarField& chi_tilde) {
    BandNodes b;
    std::size_t k = 0;
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i, ++k)
            if (chi_tilde.at(i, j) > 0.0) {
                b.idx.push_back(k);
                b.pos.push_back({g.x_of(i), g.y_of(j)});
            }
    return b;
}

/// int_0^1 G(Z(x,0,s),s) ds along forward characteristics from the seeds.
std::vector<double> forward_source_integral(const GridSpec& g, const VectorSeries& advect,
                                            const ScalarSeries& source, std::vector<Point> pts) {
    std::vector<double> acc(pts.size(), 0.0);
    StepSampler sampler;
    std::array<std::vector<Point>, 5> eps;
    std::array<ScalarField, 5> gb{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g),
                                  ScalarField(g)};
    const double c = g.dt / 12.0;
    for (int k = 0; k < g.nt; ++k) {
        sampler.prepare(g, advect, k);
        for (int s = 0; s < 5; ++s) blend_into(source[k], source[k + 1], s / 4.0, gb[s]);
        rk4_step_ensemble(g, sampler, /*backward=*/false, g.dt, pts, &eps);
        for (std::size_t m = 0; m < pts.size(); ++m) {
            acc[m] += c * (gb[0].sample(eps[0][m].x, eps[0][m].y) +
                           4.0 * gb[1].sample(eps[1][m].x, eps[1][m].y) +
                           2.0 * gb[2].sample(eps[2][m].x, eps[2][m].y) +
                           4.0 * gb[3].sample(eps[3][m].x, eps[3][m].y) +
                           gb[4].sample(eps[4][m].x, eps[4][m].y));
        }
    }
    return acc;
}

}  // namespace

double calibrate_nu(const GridSpec& g, const ReturnProfile& prof, const ExtensionOp& ext,
                    double C_pi, int steps) {
    auto passes = [&](double nu) {
        ComboField f(prof);
        f.with_drag(nu * C_pi, &ext);
        FlowMap map = FlowMap::from_combo(&f, g, g.dt / 4.0);
        return flush_check(map, g.dom).ok;
    };
    double lo = 0.0, hi = prof.M / 4.0;
    if (passes(hi)) return hi;
    for (int s = 0; s < steps; ++s) {
        double mid = 0.5 * (lo + hi);
        (passes(mid) ? lo : hi) = mid;
    }
    if (lo <= 0.0) throw config_error("calibrate_nu: bisection collapsed; M too small");
    return lo;
}

ControllerSetup setup_controller(const GridSpec& g, const ControllerConfig& cfg) {
    ControllerSetup s;
    s.grid = g;
    s.cfg = cfg;
    s.M = cfg.M_override > 0.0 ? cfg.M_override : choose_M(g.dom, g);
    s.prof = ReturnProfile::make(g.dom, s.M, cfg.lambda_d);
    s.ext = std::make_shared<ExtensionOp>(g);
    s.poisson1 = std::make_shared<DirichletPoisson>(g, Subdomain::Omega1);
    s.chi_field = ScalarField(g);
    s.chi_field.assign([&](double x, double y) { return s.prof.chi(x, y); });

    s.C_pi = measure_extension_norm(g, 2, 0, 0.0);
    {
        ComboField f(s.prof);
        FlowMap map = FlowMap::from_combo(&f, g, g.dt / 4.0);
        FlushReport rep = flush_check(map, g.dom);
        if (!rep.ok) throw config_error("setup_controller: return flow does not flush");
        s.unperturbed_flush_margin = rep.margin;
    }
    s.nu_est = calibrate_nu(g, s.prof, *s.ext, s.C_pi, cfg.nu_bisection_steps);
    s.delta = s.nu_est / (4.0 * s.C_pi * std::pow(2.0, cfg.k_weight));

    // chi_tilde from the extreme admissible flows (drag both ways), so the
    // cutoff is independent of the iterates
    ComboField base(s.prof);
    ComboField dragged(s.prof);
    dragged.with_drag(s.nu_est * s.C_pi, s.ext.get());
    ComboField boosted(s.prof);
    boosted.with_drag(-s.nu_est * s.C_pi, s.ext.get());
    FlowMap mb = FlowMap::from_combo(&base, g, g.dt / 4.0);
    FlowMap md = FlowMap::from_combo(&dragged, g, g.dt / 4.0);
    FlowMap mo = FlowMap::from_combo(&boosted, g, g.dt / 4.0);
    OriginSets o1 = origin_sets(mb, mb, g);
    OriginSets o2 = origin_sets(md, md, g);
    OriginSets o3 = origin_sets(mo, mo, g);
    s.origins = o1;
    s.origins.hull.xa = std::min({o1.hull.xa, o2.hull.xa, o3.hull.xa});
    s.origins.hull.xb = std::max({o1.hull.xb, o2.hull.xb, o3.hull.xb});
    s.origins.hull.ya = std::min({o1.hull.ya, o2.hull.ya, o3.hull.ya});
    s.origins.hull.yb = std::max({o1.hull.yb, o2.hull.yb, o3.hull.yb});
    s.origins.dist_to_omega2 = g.dom.omega2().xa - s.origins.hull.xb;
    if (s.origins.dist_to_omega2 <= 0.0)
        throw numerical_error("setup_controller: origin hull reaches closure(Omega2)");
    s.origins.chi_tilde_edge = s.origins.hull.xb;
    s.origins.chi_tilde_width = 0.9 * s.origins.dist_to_omega2;
    s.chi_tilde = ScalarField(g);
    s.chi_tilde.assign([&](double x, double) { return chi_tilde_eval(s.origins, x); });
    return s;
}

VectorSeries extend_to_omega3(const ControllerSetup& s, const VectorSeries& z) {
    const GridSpec& g = s.grid;
    const IndexBox bO = g.box_omega();
    VectorSeries out = make_vector_series(g);
    VectorField w(g);
    for (int k = 0; k <= g.nt; ++k) {
        const double gam = s.prof.gamma(g.t_of(k));
        w = z[k];
        for (int j = bO.j0; j <= bO.j1; ++j)
            for (int i = bO.i0; i <= bO.i1; ++i) w.x().at(i, j) -= gam;
        s.ext->apply(w, out[k]);
        for (std::size_t m = 0; m < out[k].x().size(); ++m)
            out[k].x().data()[m] += gam * s.chi_field.data()[m];
    }
    return out;
}

VectorSeries seed_iterate(const ControllerSetup& s, const VectorField& z0) {
    const GridSpec& g = s.grid;
    VectorField pz0 = s.ext->apply(z0);
    VectorSeries out = make_vector_series(g);
    for (int k = 0; k <= g.nt; ++k) {
        const double gam = s.prof.gamma(g.t_of(k));
        const double lam = s.prof.lambda(g.t_of(k));
        for (std::size_t m = 0; m < g.nodes(); ++m) {
            out[k].x().data()[m] = gam * s.chi_field.data()[m] + lam * pz0.x().data()[m];
            out[k].y().data()[m] = lam * pz0.y().data()[m];
        }
    }
    return out;
}

void apply_F(const ControllerSetup& s, const VectorSeries& zbar_plus,
             const VectorSeries& zbar_minus, const VectorField& z0_plus,
             const VectorField& z0_minus, FixedPointState& out, ApplyDiagnostics* diag) {
    const GridSpec& g = s.grid;
    const int nt = g.nt;
    const IndexBox bO = g.box_omega();
    const IndexBox b1 = g.box_omega1();

    // Step 1: extensions  z# = y* + pi2(zbar - ybar)
    VectorSeries zp = extend_to_omega3(s, zbar_plus);
    VectorSeries zm = extend_to_omega3(s, zbar_minus);

    // Step 2: extended coupling terms
    ScalarSeries Gp(std::size_t(nt) + 1), Gm(std::size_t(nt) + 1);
    for (int k = 0; k <= nt; ++k) {
        VectorField ys = s.ystar_slice(g.t_of(k));
        Gp[k] = coupling_G(zp[k], zm[k], ys);
        Gm[k] = coupling_G(zm[k], zp[k], ys);
    }

    // Step 3: extended initial vorticities with the chi_tilde correction
    VectorField pz0p = s.ext->apply(z0_plus);
    VectorField pz0m = s.ext->apply(z0_minus);
    ScalarField curl_pz0p = curl2d(pz0p);
    ScalarField curl_pz0m = curl2d(pz0m);
    BandNodes band = band_nodes(g, s.chi_tilde);
    ScalarField j0p = curl_pz0p, j0m = curl_pz0m;
    if (!band.idx.empty()) {
        std::vector<double> Ip = forward_source_integral(g, zm, Gp, band.pos);  // j+ rides z-
        std::vector<double> Im = forward_source_integral(g, zp, Gm, band.pos);
        for (std::size_t m = 0; m < band.idx.size(); ++m) {
            j0p.data()[band.idx[m]] -= s.chi_tilde.data()[band.idx[m]] * Ip[m];
            j0m.data()[band.idx[m]] -= s.chi_tilde.data()[band.idx[m]] * Im[m];
        }
    }

    // Step 4: crossed transport
    out.j_plus = transport_solve(j0p, zm, Gp);
    out.j_minus = transport_solve(j0m, zp, Gm);

    // Step 5/6: div-curl reconstruction slice by slice, restncted to Omega1
    if (out.z_plus.size() != std::size_t(nt) + 1) out.z_plus = make_vector_series(g);
    if (out.z_minus.size() != std::size_t(nt) + 1) out.z_minus = make_vector_series(g);
    {
        ScalarField rhs(g), phi(g);
        for (int k = 0; k <= nt; ++k) {
            const double t = g.t_of(k);
            const double lam = s.prof.lambda(t);
            const double gam = s.prof.gamma(t);
            for (int side = 0; side < 2; ++side) {
                const ScalarField& jk = side == 0 ? out.j_plus[k] : out.j_minus[k];
                const ScalarField& cz = side == 0 ? curl_pz0p : curl_pz0m;
                const VectorField& pz = side == 0 ? pz0p : pz0m;
                VectorField& dst = side == 0 ? out.z_plus[k] : out.z_minus[k];
                dst.x().fill(0.0);
                dst.y().fill(0.0);
                for (int j = b1.j0; j <= b1.j1; ++j)
                    for (int i = b1.i0; i <= b1.i1; ++i)
                        rhs.at(i, j) = jk.at(i, j) - lam * cz.at(i, j);
                s.poisson1->solve(rhs, phi);
                ddy_box(phi, b1, dst.x());
                ddx_box(phi, b1, dst.y());
                for (int j = b1.j0; j <= b1.j1; ++j)
                    for (int i = b1.i0; i <= b1.i1; ++i) {
                        dst.x().at(i, j) += gam * s.chi_field.at(i, j) + lam * pz.x().at(i, j);
                        dst.y().at(i, j) = -dst.y().at(i, j) + lam * pz.y().at(i, j);
                    }
            }
        }
    }
    out.iter += 1;

    if (diag) {
        diag->cancel_j = std::max(out.j_plus[nt].max_abs_box(b1), out.j_minus[nt].max_abs_box(b1));
        diag->cancel_z = 0.0;
        for (int side = 0; side < 2; ++side) {
            const VectorField& zfin = side == 0 ? out.z_plus[nt] : out.z_minus[nt];
            diag->cancel_z = std::max({diag->cancel_z, zfin.x().max_abs_box(bO), zfin.y().max_abs_box(bO)});
        }
        diag->flush_margin = 0.0;
        if (s.cfg.record_flush) {
            FlushReport fp = flush_check_series(zp, g.dom);
            FlushReport fm = flush_check_series(zm, g.dom);
            diag->flush_margin = std::min(fp.margin, fm.margin);
        }
    }
}

MembershipReport membership_check(const ControllerSetup& s, const VectorSeries& z_plus,
                                  const VectorSeries& z_minus) {
    const GridSpec& g = s.grid;
    const IndexBox bO = g.box_omega();
    MembershipReport rep;
    VectorField w(g);
    for (int k = 0; k <= g.nt; ++k) {
        const double t = g.t_of(k);
        const double om = weight_eval(t, s.cfg.k_weight);
        const double gam = s.prof.gamma(t);
        for (int side = 0; side < 2; ++side) {
            const VectorField& zk = side == 0 ? z_plus[k] : z_minus[k];
            w = zk;
            for (int j = bO.j0; j <= bO.j1; ++j)
                for (int i = bO.i0; i <= bO.i1; ++i) w.x().at(i, j) -= gam;
            double h = holder_norm(w, s.cfg.mtilde, s.cfg.alpha, Subdomain::Omega).value;
            rep.max_weighted = std::max(rep.max_weighted, om * h);
            double hp = holder_norm(zk, s.cfg.mtilde, s.cfg.alpha, Subdomain::Omega).value;
            rep.max_plain = std::max(rep.max_plain, hp);
        }
    }
    rep.uniform_bound = s.nu_est + s.M;
    rep.inside = rep.max_weighted < s.nu_est;
    return rep;
}

double x_norm_distance(const ControllerSetup& s, const VectorSeries& ap, const VectorSeries& am,
                       const VectorSeries& bp, const VectorSeries& bm) {
    const GridSpec& g = s.grid;
    double worst = 0.0;
    VectorField d(g);
    for (int k = 0; k <= g.nt; ++k) {
        double slice = 0.0;
        d = ap[k];
        d -= bp[k];
        slice += holder_norm(d, 1, s.cfg.alpha, Subdomain::Omega).value;
        d = am[k];
        d -= bm[k];
        slice += holder_norm(d, 1, s.cfg.alpha, Subdomain::Omega).value;
        worst = std::max(worst, slice);
    }
    return worst;
}

double cancellation_tolerance(const ControllerSetup& s, double traj_scale) {
    const GridSpec& g = s.grid;
    const double h2 = g.hmax() * g.hmax();
    return 10.0 * (h2 + g.dt * g.dt) * std::max(traj_scale, 1e-30);
}

namespace {

double trajectory_scale(const ControllerSetup& s, const FixedPointState& st) {
    const GridSpec& g = s.grid;
    const IndexBox bO = g.box_omega();
    double scale = 0.0;
    for (int k = 0; k <= g.nt; ++k) {
        const double gam = s.prof.gamma(g.t_of(k));
        double zdev = 0.0;
        for (int side = 0; side < 2; ++side) {
            const VectorField& z = side == 0 ? st.z_plus[k] : st.z_minus[k];
            for (int j = bO.j0; j <= bO.j1; ++j)
                for (int i = bO.i0; i <= bO.i1; ++i)
                    zdev = std::max({zdev, std::abs(z.x().at(i, j) - gam), std::abs(z.y().at(i, j))});
        }
        scale = std::max({scale, zdev, st.j_plus[k].max_abs(), st.j_minus[k].max_abs()});
    }
    return scale;
}

}  // namespace

FixedPointState iterate_to_fixed_point(ControllerSetup& s, const VectorField& z0_plus,
                                       const VectorField& z0_minus, IterationReport& rep) {
    const GridSpec& g = s.grid;
    const int nt = g.nt;
    const ControllerConfig& cfg = s.cfg;

    const double n0p = holder_norm(z0_plus, cfg.mtilde, cfg.alpha, Subdomain::Omega).value;
    const double n0m = holder_norm(z0_minus, cfg.mtilde, cfg.alpha, Subdomain::Omega).value;
    rep.data_norm = std::max(n0p, n0m);
    rep.nu_est = s.nu_est;
    rep.C_pi = s.C_pi;

    for (double kw = cfg.k_weight;; kw *= 2.0) {
        s.cfg.k_weight = kw;
        s.delta = s.nu_est / (4.0 * s.C_pi * std::pow(2.0, kw));
        rep.k_weight = kw;
        rep.delta = s.delta;
        if (cfg.enforce_delta && rep.data_norm > s.delta)
            throw config_error("iterate_to_fixed_point: data norm exceeds the admissible "
                               "threshold delta(k); decrease the data norm");

        // seed (ybar + lambda z0+, ybar + lambda z0-), stored in extended form
        FixedPointState prev;
        prev.z_plus = seed_iterate(s, z0_plus);
        prev.z_minus = seed_iterate(s, z0_minus);

        rep.records.clear();
        rep.converged = false;
        FixedPointState cur;
        double d_prev = -1.0;
        int rising = 0;
        bool no_contraction = false;
        for (int it = 1; it <= cfg.max_iter; ++it) {
            ApplyDiagnostics diag;
            apply_F(s, prev.z_plus, prev.z_minus, z0_plus, z0_minus, cur, &diag);
            const double d = x_norm_distance(s, cur.z_plus, cur.z_minus, prev.z_plus, prev.z_minus);
            IterationRecord recd;
            recd.iter = it;
            recd.d_X = d;
            recd.ratio = d_prev > 0.0 ? d / d_prev : 0.0;
            recd.flush_margin = diag.flush_margin;
            if (cfg.record_membership)
                recd.max_weighted_norm = membership_check(s, cur.z_plus, cur.z_minus).max_weighted;
            rep.records.push_back(recd);

            const double scale = trajectory_scale(s, cur);
            rep.cancel_tol = cancellation_tolerance(s, scale);
            rep.cancel_j = diag.cancel_j;
            rep.cancel_z = diag.cancel_z;
            if (diag.cancel_j > 10.0 * rep.cancel_tol || diag.cancel_z > 10.0 * rep.cancel_tol)
                throw numerical_error("apply_F: terminal cancellation failed beyond 10x cancel_tol");

            if (d_prev > 0.0 && d >= d_prev) {
                if (++rising >= 3 && d > 10.0 * cfg.tol_X) {
                    no_contraction = true;
                    break;
                }
            } else {
                rising = 0;
            }
            std::swap(prev.z_plus, cur.z_plus);
            std::swap(prev.z_minus, cur.z_minus);
            std::swap(prev.j_plus, cur.j_plus);
            std::swap(prev.j_minus, cur.j_minus);
            prev.iter = it;
            if (d < cfg.tol_X) {
                rep.converged = true;
                break;
            }
            d_prev = d;
        }
        if (rep.converged) {
            // contraction factor over the pairs above the rounding floor
            const double floor = 1e-12 * std::max(1.0, s.M);
            double kfit = 0.0;
            for (std::size_t i = 1; i < rep.records.size(); ++i)
                if (rep.records[i - 1].d_X > floor && rep.records[i].d_X > floor)
                    kfit = std::max(kfit, rep.records[i].ratio);
            rep.kappa_fit = kfit;
            return prev;
        }
        if (!no_contraction)
            throw numerical_error("iterate_to_fixed_point: max_iter reached before tol_X");
        if (2.0 * kw > cfg.k_max)
            throw numerical_error("iterate_to_fixed_point: no contraction up to k_max; "
                                  "decrease the data norm");
    }
}

}  // namespace mhdctrl
