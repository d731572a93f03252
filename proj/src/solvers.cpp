#include "mhdctrl/solvers.hpp"

#include <fftw3.h>

#include <cmath>

namespace mhdctrl {

DirichletPoisson::DirichletPoisson(const GridSpec& g, Subdomain sd)
    : g_(g), box_(subdomain_box(g, sd)) {
    ni_ = box_.ni() - 2;
    nj_ = box_.nj() - 2;
    if (ni_ < 1 || nj_ < 1) throw std::invalid_argument("DirichletPoisson: empty interior");
    eig_.resize(std::size_t(ni_) * nj_);
    const double pi = 3.14159265358979323846;
    for (int q = 0; q < nj_; ++q) {
        double ey = (2.0 - 2.0 * std::cos((q + 1) * pi / (nj_ + 1))) / (g.hy * g.hy);
        for (int p = 0; p < ni_; ++p) {
            double ex = (2.0 - 2.0 * std::cos((p + 1) * pi / (ni_ + 1))) / (g.hx * g.hx);
            eig_[std::size_t(q) * ni_ + p] = ex + ey;
        }
    }
    buf_.resize(std::size_t(ni_) * nj_);
    plan_ = fftw_plan_r2r_2d(nj_, ni_, buf_.data(), buf_.data(), FFTW_RODFT00, FFTW_RODFT00,
                             FFTW_ESTIMATE);
}

DirichletPoisson::~DirichletPoisson() {
    if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void DirichletPoisson::solve(const ScalarField& rhs, ScalarField& phi) const {
    auto* self = const_cast<DirichletPoisson*>(this);
    for (int q = 0; q < nj_; ++q)
        for (int p = 0; p < ni_; ++p)
            self->buf_[std::size_t(q) * ni_ + p] = rhs.at(box_.i0 + 1 + p, box_.j0 + 1 + q);
    fftw_execute(static_cast<fftw_plan>(plan_));
    const double norm = 1.0 / (4.0 * (ni_ + 1) * (nj_ + 1));
    for (std::size_t k = 0; k < self->buf_.size(); ++k) self->buf_[k] *= norm / eig_[k];
    fftw_execute(static_cast<fftw_plan>(plan_));
    phi.fill(0.0);
    for (int q = 0; q < nj_; ++q)
        for (int p = 0; p < ni_; ++p)
            phi.at(box_.i0 + 1 + p, box_.j0 + 1 + q) = buf_[std::size_t(q) * ni_ + p];
}

double DirichletPoisson::residual(const ScalarField& rhs, const ScalarField& phi) const {
    double worst = 0.0;
    const double ihx2 = 1.0 / (g_.hx * g_.hx), ihy2 = 1.0 / (g_.hy * g_.hy);
    for (int j = box_.j0 + 1; j < box_.j1; ++j)
        for (int i = box_.i0 + 1; i < box_.i1; ++i) {
            double lap = (phi.at(i + 1, j) - 2 * phi.at(i, j) + phi.at(i - 1, j)) * ihx2 +
                         (phi.at(i, j + 1) - 2 * phi.at(i, j) + phi.at(i, j - 1)) * ihy2;
            worst = std::max(worst, std::abs(rhs.at(i, j) + lap));
        }
    return worst;
}

NeumannPoisson::NeumannPoisson(const GridSpec& g, Subdomain sd, double tol)
    : g_(g), box_(subdomain_box(g, sd)), tol_(tol) {}

namespace {

// Weighted 5-point Neumann Laplacian with reflected ghosts: w .* Lap_h(q).
// Trace contributions are handled separately on the right-hand side.
struct NeumannOperator {
    const GridSpec& g;
    IndexBox b;
    int ni, nj;
    std::vector<double> w;  // trapezoid weights, w = wx*wy

    explicit NeumannOperator(const GridSpec& gg, const IndexBox& bb)
        : g(gg), b(bb), ni(bb.ni()), nj(bb.nj()), w(std::size_t(ni) * nj) {
        for (int j = 0; j < nj; ++j)
            for (int i = 0; i < ni; ++i) {
                double wx = (i == 0 || i == ni - 1) ? 0.5 : 1.0;
                double wy = (j == 0 || j == nj - 1) ? 0.5 : 1.0;
                w[std::size_t(j) * ni + i] = wx * wy;
            }
    }

    std::size_t idx(int i, int j) const { return std::size_t(j) * ni + i; }

    void apply(const std::vector<double>& q, std::vector<double>& out) const {
        const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
        for (int j = 0; j < nj; ++j) {
            for (int i = 0; i < ni; ++i) {
                double c = q[idx(i, j)];
                double xl = (i > 0) ? q[idx(i - 1, j)] : q[idx(i + 1, j)];
                double xr = (i < ni - 1) ? q[idx(i + 1, j)] : q[idx(i - 1, j)];
                double yb = (j > 0) ? q[idx(i, j - 1)] : q[idx(i, j + 1)];
                double yt = (j < nj - 1) ? q[idx(i, j + 1)] : q[idx(i, j - 1)];
                double lap = (xl + xr - 2 * c) * ihx2 + (yb + yt - 2 * c) * ihy2;
                out[idx(i, j)] = w[idx(i, j)] * lap;
            }
        }
    }
};

}  // namespace

ScalarField NeumannPoisson::solve(const ScalarField& rhs, const NeumannTrace& trace,
                                  double compat_tol, double* defect_out) const {
    NeumannOperator op(g_, box_);
    const int ni = op.ni, nj = op.nj;
    const std::size_t n = std::size_t(ni) * nj;

    // compatibility: integral of rhs over the box vs boundary integral of the trace
    double vol = 0.0, flux = 0.0, tmass = 0.0;
    for (int j = 0; j < nj; ++j)
        for (int i = 0; i < ni; ++i)
            vol += op.w[op.idx(i, j)] * rhs.at(box_.i0 + i, box_.j0 + j) * g_.hx * g_.hy;
    auto edge_sum = [](const std::vector<double>& e, double h, double& fl, double& ma) {
        for (std::size_t k = 0; k < e.size(); ++k) {
            double w = (k == 0 || k + 1 == e.size()) ? 0.5 : 1.0;
            fl += w * e[k] * h;
            ma += w * std::abs(e[k]) * h;
        }
    };
    edge_sum(trace.left, g_.hy, flux, tmass);
    edge_sum(trace.right, g_.hy, flux, tmass);
    edge_sum(trace.bottom, g_.hx, flux, tmass);
    edge_sum(trace.top, g_.hx, flux, tmass);
    const double defect = flux - vol;
    if (defect_out) *defect_out = defect;
    const double scale = std::max({1e-30, tmass, std::abs(vol)});
    if (std::abs(defect) > 10.0 * compat_tol * std::max(1.0, scale))
        throw numerical_error("poisson_neumann: compatibility defect beyond tolerance");
    const double perimeter = 2.0 * (box_.i1 - box_.i0) * g_.hx + 2.0 * (box_.j1 - box_.j0) * g_.hy;
    const double shift = defect / perimeter;  // uniform mean projection of the trace

    // right-hand side of w .* (Lap q) = w .* (rhs + trace terms)
    std::vector<double> bvec(n);
    for (int j = 0; j < nj; ++j)
        for (int i = 0; i < ni; ++i) bvec[op.idx(i, j)] = rhs.at(box_.i0 + i, box_.j0 + j);
    // ghost elimination: Lap_h q = reflected_op(q) + 2 g / h on a boundary row
    auto add_trace = [&](int i, int j, double gval, double h) {
        bvec[op.idx(i, j)] -= 2.0 * (gval - shift) / h;
    };
    for (int j = 0; j < nj; ++j) {
        add_trace(0, j, trace.left[j], g_.hx);
        add_trace(ni - 1, j, trace.right[j], g_.hx);
    }
    for (int i = 0; i < ni; ++i) {
        add_trace(i, 0, trace.bottom[i], g_.hy);
        add_trace(i, nj - 1, trace.top[i], g_.hy);
    }
    for (std::size_t k = 0; k < n; ++k) bvec[k] *= op.w[k];

    // deflate constants
    double wsum = 0.0;
    for (double x : op.w) wsum += x;
    auto deflate = [&](std::vector<double>& v) {
        double mean = 0.0;
        for (std::size_t k = 0; k < n; ++k) mean += v[k];
        mean /= double(n);
        for (std::size_t k = 0; k < n; ++k) v[k] -= mean * 1.0;
    };
    auto deflate_weighted = [&](std::vector<double>& v) {
        double mean = 0.0;
        for (std::size_t k = 0; k < n; ++k) mean += op.w[k] * v[k];
        mean /= wsum;
        for (std::size_t k = 0; k < n; ++k) v[k] -= mean;
    };
    deflate(bvec);  // range of the weighted operator is orthogonal to constants

    // CG on -w.*Lap (symmetric positive semidefinite)
    std::vector<double> q(n, 0.0), r = bvec, p = r, Ap(n);
    for (std::size_t k = 0; k < n; ++k) {
        r[k] = -r[k];  // we solve (-wLap) q = -b
        p[k] = r[k];
    }
    double rr = 0.0, b2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        rr += r[k] * r[k];
        b2 += bvec[k] * bvec[k];
    }
    const double stop = tol_ * tol_ * std::max(b2, 1e-300);
    const int itmax = 20 * int(n) + 200;
    for (int it = 0; it < itmax && rr > stop; ++it) {
        op.apply(p, Ap);
        for (std::size_t k = 0; k < n; ++k) Ap[k] = -Ap[k];
        double pAp = 0.0;
        for (std::size_t k = 0; k < n; ++k) pAp += p[k] * Ap[k];
        if (pAp <= 0.0) break;
        double alpha = rr / pAp;
        for (std::size_t k = 0; k < n; ++k) {
            q[k] += alpha * p[k];
            r[k] -= alpha * Ap[k];
        }
        double rr2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) rr2 += r[k] * r[k];
        double beta = rr2 / rr;
        rr = rr2;
        for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
    }
    deflate_weighted(q);  // zero weighted mean

    ScalarField out(g_);
    for (int j = 0; j < nj; ++j)
        for (int i = 0; i < ni; ++i) out.at(box_.i0 + i, box_.j0 + j) = q[op.idx(i, j)];
    return out;
}

ScalarSeries transport_solve(const ScalarField& j0, const VectorSeries& advect,
                             const ScalarSeries& source) {
    const GridSpec& g = j0.grid();
    const int nt = g.nt;
    if (int(advect.size()) != nt + 1 || int(source.size()) != nt + 1)
        throw std::invalid_argument("transport_solve: series length mismatch");

    ScalarSeries j(std::size_t(nt) + 1, ScalarField(g));
    j[0] = j0;

    const std::size_t nn = g.nodes();
    std::vector<Point> nodes(nn);
    {
        std::size_t k = 0;
        for (int jj = 0; jj <= g.ny; ++jj)
            for (int i = 0; i <= g.nx; ++i) nodes[k++] = {g.x_of(i), g.y_of(jj)};
    }

    // departure map D (positions at t=0) and accumulated source S, per node
    VectorField D(g), Dn(g);
    ScalarField S(g), Sn(g);
    {
        std::size_t k = 0;
        for (int jj = 0; jj <= g.ny; ++jj)
            for (int i = 0; i <= g.nx; ++i) {
                D.x().at(i, jj) = g.x_of(i);
                D.y().at(i, jj) = g.y_of(jj);
                ++k;
            }
    }

    StepSampler sampler;
    std::array<std::vector<Point>, 5> eps;
    std::array<ScalarField, 5> gb{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g),
                                  ScalarField(g)};
    std::vector<Point> pts(nn);

    for (int k = 0; k < nt; ++k) {
        sampler.prepare(g, advect, k);
        for (int s = 0; s < 5; ++s) blend_into(source[k], source[k + 1], s / 4.0, gb[s]);
        pts = nodes;
        rk4_step_ensemble(g, sampler, /*backward=*/true, g.dt, pts, &eps);
        // eps[i] holds positions at t_{k+1} - i*dt/4; eps[4] are the feet at t_k.
        const double c = g.dt / 12.0;
        std::size_t m = 0;
        for (int jj = 0; jj <= g.ny; ++jj) {
            for (int i = 0; i <= g.nx; ++i, ++m) {
                const Point& foot = eps[4][m];
                double s_local = gb[0].sample(foot.x, foot.y) +
                                 4.0 * gb[1].sample(eps[3][m].x, eps[3][m].y) +
                                 2.0 * gb[2].sample(eps[2][m].x, eps[2][m].y) +
                                 4.0 * gb[3].sample(eps[1][m].x, eps[1][m].y) +
                                 gb[4].sample(eps[0][m].x, eps[0][m].y);
                double dx = D.x().sample(foot.x, foot.y);
                double dy = D.y().sample(foot.x, foot.y);
                Dn.x().at(i, jj) = dx;
                Dn.y().at(i, jj) = dy;
                Sn.at(i, jj) = S.sample(foot.x, foot.y) + c * s_local;
                j[k + 1].at(i, jj) = j0.sample(dx, dy) + Sn.at(i, jj);
            }
        }
        std::swap(D, Dn);
        std::swap(S, Sn);
    }
    return j;
}

VectorField div_curl_reconstruct(const ScalarField& j, const VectorField& z0, double t,
                                 const ReturnProfile& prof, const GridSpec& g) {
    ExtensionOp ext(g);
    DirichletPoisson poisson(g, Subdomain::Omega1);
    VectorField pz0 = ext.apply(z0);
    ScalarField curl_pz0 = curl2d(pz0);
    const double lam = prof.lambda(t);

    ScalarField rhs(g);
    const IndexBox b1 = g.box_omega1();
    for (int jj = b1.j0; jj <= b1.j1; ++jj)
        for (int i = b1.i0; i <= b1.i1; ++i)
            rhs.at(i, jj) = j.at(i, jj) - lam * curl_pz0.at(i, jj);
    ScalarField phi(g);
    poisson.solve(rhs, phi);

    VectorField out(g);
    ddy_box(phi, b1, out.x());
    ddx_box(phi, b1, out.y());
    for (int jj = b1.j0; jj <= b1.j1; ++jj)
        for (int i = b1.i0; i <= b1.i1; ++i) {
            double yx = prof.gamma(t) * prof.chi(g.x_of(i), g.y_of(jj));
            out.x().at(i, jj) += yx + lam * pz0.x().at(i, jj);
            out.y().at(i, jj) = -out.y().at(i, jj) + lam * pz0.y().at(i, jj);
        }
    return out;
}

void leray_project_omega(VectorField& u) {
    const GridSpec& g = u.grid();
    const IndexBox b = g.box_omega();
    ScalarField dv = div2d_box(u, b);
    // homogeneous Neumann data keeps wall tangency and the Gamma0 through-flow
    NeumannTrace trace = NeumannTrace::zeros(b);
    NeumannPoisson np(g, Subdomain::Omega);
    ScalarField p = np.solve(dv, trace);
    ScalarField px(g), py(g);
    ddx_box(p, b, px);
    ddy_box(p, b, py);
    for (int j = b.j0; j <= b.j1; ++j)
        for (int i = b.i0; i <= b.i1; ++i) {
            u.x().at(i, j) -= px.at(i, j);
            u.y().at(i, j) -= py.at(i, j);
        }
}

}  // namespace mhdctrl
