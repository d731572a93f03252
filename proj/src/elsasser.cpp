#include "mhdctrl/elsasser.hpp"

#include <cmath>

namespace mhdctrl {

ElsasserState to_elsasser(const VectorField& u, const VectorField& H, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("to_elsasser: mu must be positive");
    const double rmu = std::sqrt(mu);
    ElsasserState s;
    s.mu = mu;
    s.z_plus = u;
    s.z_minus = u;
    VectorField scaled = H;
    scaled *= rmu;
    s.z_plus += scaled;
    s.z_minus -= scaled;
    return s;
}

void from_elsasser(const ElsasserState& s, VectorField& u, VectorField& H) {
    u = s.z_plus;
    u += s.z_minus;
    u *= 0.5;
    H = s.z_plus;
    H -= s.z_minus;
    H *= 0.5 / std::sqrt(s.mu);
}

ScalarField coupling_G(const VectorField& z_self, const VectorField& z_other,
                       const VectorField& ystar_slice) {
    const GridSpec& g = z_self.grid();
    ScalarField A = ddx(z_other.x());  // d1 z(other)_1 - d1 z(self)_1
    {
        ScalarField t = ddx(z_self.x());
        A -= t;
    }
    ScalarField B = ddx(z_self.y());  // d1 z(self)_2 - d1 z(other)_2
    {
        ScalarField t = ddx(z_other.y());
        B -= t;
    }
    ScalarField C = ddy(z_self.x());  // d2 z(self)_1 - d2 z(other)_1
    {
        ScalarField t = ddy(z_other.x());
        C -= t;
    }
    VectorField w = z_self;
    w -= ystar_slice;
    ScalarField P1 = ddx(w.y());
    ScalarField P2 = ddy(w.x());
    ScalarField P3 = ddx(w.x());

    ScalarField G(g);
    const std::size_t n = G.size();
    double* pg = G.data();
    const double *pa = A.data(), *pb = B.data(), *pc = C.data();
    const double *p1 = P1.data(), *p2 = P2.data(), *p3 = P3.data();
    for (std::size_t k = 0; k < n; ++k)
        pg[k] = -pa[k] * (p1[k] + p2[k]) - (pb[k] + pc[k]) * p3[k];
    return G;
}

ScalarField coupling_g_unstructured(const VectorField& z_self, const VectorField& z_other) {
    ScalarField d2o1 = ddy(z_other.x());
    ScalarField d2o2 = ddy(z_other.y());
    ScalarField d1o1 = ddx(z_other.x());
    ScalarField d1o2 = ddx(z_other.y());
    ScalarField d1s1 = ddx(z_self.x());
    ScalarField d2s1 = ddy(z_self.x());
    ScalarField d1s2 = ddx(z_self.y());
    ScalarField d2s2 = ddy(z_self.y());
    ScalarField g(z_self.grid());
    for (std::size_t k = 0; k < g.size(); ++k)
        g.data()[k] = d2o1.data()[k] * d1s1.data()[k] + d2o2.data()[k] * d2s1.data()[k] -
                      d1o1.data()[k] * d1s2.data()[k] - d1o2.data()[k] * d2s2.data()[k];
    return g;
}

namespace {

/// (a . grad) b component c, restricted to the Omega box.
ScalarField advective(const VectorField& a, const ScalarField& bc, const IndexBox& b) {
    ScalarField dx(bc.grid()), dy(bc.grid());
    ddx_box(bc, b, dx);
    ddy_box(bc, b, dy);
    ScalarField out(bc.grid());
    for (int j = b.j0; j <= b.j1; ++j)
        for (int i = b.i0; i <= b.i1; ++i)
            out.at(i, j) = a.x().at(i, j) * dx.at(i, j) + a.y().at(i, j) * dy.at(i, j);
    return out;
}

}  // namespace

ScalarField q_corrector(const VectorField& u, const VectorField& H, const VectorField& dtH,
                        double compat_tol) {
    const GridSpec& g = u.grid();
    const IndexBox b = g.box_omega();
    ScalarField adv_uH1 = advective(u, H.x(), b);
    ScalarField adv_Hu1 = advective(H, u.x(), b);
    // W = dt H1 + (u.grad) H1 - (H.grad) u1 on the two vertical walls
    auto W = [&](int i, int j) {
        return dtH.x().at(i, j) + adv_uH1.at(i, j) - adv_Hu1.at(i, j);
    };
    NeumannTrace trace = NeumannTrace::zeros(b);
    for (int j = 0; j < b.nj(); ++j) {
        trace.left[j] = W(b.i0, b.j0 + j);    // n1 = -1
        trace.right[j] = -W(b.i1, b.j0 + j);  // n1 = +1
    }
    // zero-mean projection over Gamma0 (keeps the wall data at zero)
    double mean = 0.0, mass = 0.0, len = 2.0 * g.dom.W;
    for (int j = 0; j < b.nj(); ++j) {
        double w = (j == 0 || j == b.nj() - 1) ? 0.5 : 1.0;
        mean += w * (trace.left[j] + trace.right[j]) * g.hy;
        mass += w * (std::abs(trace.left[j]) + std::abs(trace.right[j])) * g.hy;
    }
    if (std::abs(mean) > 10.0 * compat_tol * std::max(1.0, mass))
        throw numerical_error("q_corrector: Gamma0 data mean beyond compatibility tolerance");
    const double shift = mean / len;
    for (int j = 0; j < b.nj(); ++j) {
        trace.left[j] -= shift;
        trace.right[j] -= shift;
    }
    NeumannPoisson np(g, Subdomain::Omega);
    ScalarField zero(g);
    return np.solve(zero, trace);
}

VectorField time_derivative(const VectorSeries& s, int k) {
    const GridSpec& g = s.front().grid();
    const int nt = int(s.size()) - 1;
    const double idt = 1.0 / g.dt;
    VectorField out(g);
    auto axpy = [&](double c, const VectorField& v) {
        for (std::size_t m = 0; m < out.x().size(); ++m) {
            out.x().data()[m] += c * v.x().data()[m];
            out.y().data()[m] += c * v.y().data()[m];
        }
    };
    if (k == 0) {
        axpy(-1.5 * idt, s[0]);
        axpy(2.0 * idt, s[1]);
        axpy(-0.5 * idt, s[2]);
    } else if (k == nt) {
        axpy(1.5 * idt, s[nt]);
        axpy(-2.0 * idt, s[nt - 1]);
        axpy(0.5 * idt, s[nt - 2]);
    } else {
        axpy(0.5 * idt, s[k + 1]);
        axpy(-0.5 * idt, s[k - 1]);
    }
    return out;
}

PressureRecovery recover_pressures(const VectorSeries& z_plus, const VectorSeries& z_minus,
                                   double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("recover_pressures: mu must be positive");
    const GridSpec& g = z_plus.front().grid();
    const IndexBox b = g.box_omega();
    const int nt = int(z_plus.size()) - 1;
    NeumannPoisson np(g, Subdomain::Omega);
    PressureRecovery out;
    out.p_plus.reserve(nt + 1);
    out.p_minus.reserve(nt + 1);
    out.p.reserve(nt + 1);
    out.q.reserve(nt + 1);

    const double rmu = std::sqrt(mu);
    for (int k = 0; k <= nt; ++k) {
        double defect = 0.0;
        for (int sign = 0; sign < 2; ++sign) {
            const VectorSeries& self = sign == 0 ? z_plus : z_minus;
            const VectorSeries& other = sign == 0 ? z_minus : z_plus;
            VectorField r = time_derivative(self, k);
            ScalarField ax = advective(other[k], self[k].x(), b);
            ScalarField ay = advective(other[k], self[k].y(), b);
            for (int j = b.j0; j <= b.j1; ++j)
                for (int i = b.i0; i <= b.i1; ++i) {
                    r.x().at(i, j) = -r.x().at(i, j) - ax.at(i, j);
                    r.y().at(i, j) = -r.y().at(i, j) - ay.at(i, j);
                }
            ScalarField rhs = div2d_box(r, b);
            NeumannTrace trace = NeumannTrace::zeros(b);
            for (int j = 0; j < b.nj(); ++j) {
                trace.left[j] = -r.x().at(b.i0, b.j0 + j);
                trace.right[j] = r.x().at(b.i1, b.j0 + j);
            }
            for (int i = 0; i < b.ni(); ++i) {
                trace.bottom[i] = -r.y().at(b.i0 + i, b.j0);
                trace.top[i] = r.y().at(b.i0 + i, b.j1);
            }
            ScalarField p = np.solve(rhs, trace);
            // Helmholtz defect: the non-gradient remainder of r on the interior
            ScalarField px(g), py(g);
            ddx_box(p, b, px);
            ddy_box(p, b, py);
            for (int j = b.j0 + 1; j < b.j1; ++j)
                for (int i = b.i0 + 1; i < b.i1; ++i)
                    defect = std::max(defect, std::hypot(r.x().at(i, j) - px.at(i, j),
                                                         r.y().at(i, j) - py.at(i, j)));
            (sign == 0 ? out.p_plus : out.p_minus).push_back(std::move(p));
        }
        ScalarField p(g), q(g);
        for (int j = b.j0; j <= b.j1; ++j)
            for (int i = b.i0; i <= b.i1; ++i) {
                double pp = out.p_plus[k].at(i, j), pm = out.p_minus[k].at(i, j);
                p.at(i, j) = 0.5 * (pp + pm);
                q.at(i, j) = (pp - pm) / (2.0 * rmu);
            }
        out.p.push_back(std::move(p));
        out.q.push_back(std::move(q));
        out.helmholtz_defect.push_back(defect);
    }
    return out;
}

ScalarSeries q_corrector_series(const VectorSeries& u, const VectorSeries& H, double compat_tol) {
    const int nt = int(u.size()) - 1;
    ScalarSeries out;
    out.reserve(nt + 1);
    for (int k = 0; k <= nt; ++k)
        out.push_back(q_corrector(u[k], H[k], time_derivative(H, k), compat_tol));
    return out;
}

}  // namespace mhdctrl
