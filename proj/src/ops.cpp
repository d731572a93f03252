#include "mhdctrl/ops.hpp"

#include <array>
#include <cmath>

namespace mhdctrl {

void ddx_box(const ScalarField& f, const IndexBox& b, ScalarField& out) {
    if (b.ni() < 3) throw std::invalid_argument("ddx_box: box too narrow");
    const double ih = 1.0 / (2.0 * f.grid().hx);
    for (int j = b.j0; j <= b.j1; ++j) {
        out.at(b.i0, j) = (-3 * f.at(b.i0, j) + 4 * f.at(b.i0 + 1, j) - f.at(b.i0 + 2, j)) * ih;
        for (int i = b.i0 + 1; i < b.i1; ++i)
            out.at(i, j) = (f.at(i + 1, j) - f.at(i - 1, j)) * ih;
        out.at(b.i1, j) = (3 * f.at(b.i1, j) - 4 * f.at(b.i1 - 1, j) + f.at(b.i1 - 2, j)) * ih;
    }
}

void ddy_box(const ScalarField& f, const IndexBox& b, ScalarField& out) {
    if (b.nj() < 3) throw std::invalid_argument("ddy_box: box too low");
    const double ih = 1.0 / (2.0 * f.grid().hy);
    for (int j = b.j0; j <= b.j1; ++j) {
        for (int i = b.i0; i <= b.i1; ++i) {
            if (j == b.j0)
                out.at(i, j) = (-3 * f.at(i, j) + 4 * f.at(i, j + 1) - f.at(i, j + 2)) * ih;
            else if (j == b.j1)
                out.at(i, j) = (3 * f.at(i, j) - 4 * f.at(i, j - 1) + f.at(i, j - 2)) * ih;
            else
                out.at(i, j) = (f.at(i, j + 1) - f.at(i, j - 1)) * ih;
        }
    }
}

ScalarField ddx(const ScalarField& f) {
    ScalarField out(f.grid());
    ddx_box(f, f.grid().box_omega3(), out);
    return out;
}

ScalarField ddy(const ScalarField& f) {
    ScalarField out(f.grid());
    ddy_box(f, f.grid().box_omega3(), out);
    return out;
}

ScalarField curl2d(const VectorField& v) {
    ScalarField out = ddx(v.y());
    ScalarField d2 = ddy(v.x());
    out -= d2;
    return out;
}

ScalarField div2d(const VectorField& v) {
    ScalarField out = ddx(v.x());
    ScalarField d2 = ddy(v.y());
    out += d2;
    return out;
}

ScalarField curl2d_box(const VectorField& v, const IndexBox& b) {
    ScalarField out(v.grid());
    ScalarField d2(v.grid());
    ddx_box(v.y(), b, out);
    ddy_box(v.x(), b, d2);
    for (int j = b.j0; j <= b.j1; ++j)
        for (int i = b.i0; i <= b.i1; ++i) out.at(i, j) -= d2.at(i, j);
    return out;
}

ScalarField div2d_box(const VectorField& v, const IndexBox& b) {
    ScalarField out(v.grid());
    ScalarField d2(v.grid());
    ddx_box(v.x(), b, out);
    ddy_box(v.y(), b, d2);
    for (int j = b.j0; j <= b.j1; ++j)
        for (int i = b.i0; i <= b.i1; ++i) out.at(i, j) += d2.at(i, j);
    return out;
}

VectorField grad(const ScalarField& f) {
    VectorField out(f.grid());
    out.x() = ddx(f);
    out.y() = ddy(f);
    return out;
}

VectorField perp_grad(const ScalarField& f) {
    VectorField out(f.grid());
    out.x() = ddy(f);
    out.y() = ddx(f);
    out.y() *= -1.0;
    return out;
}

namespace {

// All box-restricted derivatives D^beta f for |beta| <= m, indexed as
// derivs[bx][by].  Mixed partials apply x-derivatives first.
std::vector<std::vector<ScalarField>> box_derivatives(const ScalarField& f, int m,
                                                      const IndexBox& b) {
    std::vector<std::vector<ScalarField>> d(m + 1);
    std::vector<ScalarField> xline(m + 1);  // d^bx/dx^bx f
    xline[0] = f;
    for (int bx = 1; bx <= m; ++bx) {
        xline[bx] = ScalarField(f.grid());
        ddx_box(xline[bx - 1], b, xline[bx]);
    }
    for (int bx = 0; bx <= m; ++bx) {
        d[bx].resize(m - bx + 1);
        d[bx][0] = xline[bx];
        for (int by = 1; by + bx <= m; ++by) {
            d[bx][by] = ScalarField(f.grid());
            ddy_box(d[bx][by - 1], b, d[bx][by]);
        }
    }
    return d;
}

struct PairOffset {
    int di, dj;
    double inv_dist_alpha;
};

std::vector<PairOffset> quotient_offsets(const GridSpec& g, double alpha) {
    const double rmax = 4.0 * g.hmax();
    std::vector<PairOffset> offs;
    const int dimax = int(rmax / g.hx) + 1;
    const int djmax = int(rmax / g.hy) + 1;
    for (int di = 0; di <= dimax; ++di) {
        for (int dj = (di == 0 ? 1 : -djmax); dj <= djmax; ++dj) {
            double dist = std::hypot(di * g.hx, dj * g.hy);
            if (dist <= 0.0 || dist > rmax * (1 + 1e-12)) continue;
            offs.push_back({di, dj, std::pow(dist, -alpha)});
        }
    }
    return offs;
}

HolderEstimate holder_norm_components(const std::vector<const ScalarField*>& comps, int m,
                                      double alpha, Subdomain sd) {
    if (m < 0 || m > 3) throw std::invalid_argument("holder_norm: order must be in [0,3]");
    const GridSpec& g = comps[0]->grid();
    const IndexBox b = subdomain_box(g, sd);
    std::vector<std::vector<std::vector<ScalarField>>> d;  // [comp][bx][by]
    d.reserve(comps.size());
    for (const ScalarField* c : comps) d.push_back(box_derivatives(*c, m, b));

    double total = 0.0;
    // sup of |D^beta f| (euclidean over components) for all |beta| <= m
    for (int ord = 0; ord <= m; ++ord) {
        for (int bx = 0; bx <= ord; ++bx) {
            const int by = ord - bx;
            double sup = 0.0;
            for (int j = b.j0; j <= b.j1; ++j) {
                for (int i = b.i0; i <= b.i1; ++i) {
                    double s2 = 0.0;
                    for (std::size_t c = 0; c < comps.size(); ++c) {
                        double v = d[c][bx][by].at(i, j);
                        s2 += v * v;
                    }
                    sup = std::max(sup, s2);
                }
            }
            total += std::sqrt(sup);
        }
    }
    // Holder quotient of the top-order derivatives
    if (alpha > 0.0) {
        auto offs = quotient_offsets(g, alpha);
        for (int bx = 0; bx <= m; ++bx) {
            const int by = m - bx;
            double q = 0.0;
            for (int j = b.j0; j <= b.j1; ++j) {
                for (int i = b.i0; i <= b.i1; ++i) {
                    for (const auto& o : offs) {
                        int i2 = i + o.di, j2 = j + o.dj;
                        if (i2 < b.i0 || i2 > b.i1 || j2 < b.j0 || j2 > b.j1) continue;
                        double s2 = 0.0;
                        for (std::size_t c = 0; c < comps.size(); ++c) {
                            double dv = d[c][bx][by].at(i2, j2) - d[c][bx][by].at(i, j);
                            s2 += dv * dv;
                        }
                        q = std::max(q, s2 * o.inv_dist_alpha * o.inv_dist_alpha);
                    }
                }
            }
            total += std::sqrt(q);
        }
    }
    return HolderEstimate{m, alpha, total, sd};
}

}  // namespace

HolderEstimate holder_norm(const ScalarField& f, int m, double alpha, Subdomain sd) {
    return holder_norm_components({&f}, m, alpha, sd);
}

HolderEstimate holder_norm(const VectorField& f, int m, double alpha, Subdomain sd) {
    return holder_norm_components({&f.x(), &f.y()}, m, alpha, sd);
}

ExtensionOp::ExtensionOp(const GridSpec& g) : g_(g), cut_(g) {
    const IndexBox om = g.box_omega();
    auto fold = [](int i, int lo, int hi) {
        // even reflection of node index i into [lo, hi]
        const int n = hi - lo;
        int k = i - lo;
        int period = 2 * n;
        k = ((k % period) + period) % period;
        if (k > n) k = period - k;
        return lo + k;
    };
    fold_i_.resize(g.npx());
    fold_j_.resize(g.npy());
    for (int i = 0; i <= g.nx; ++i) fold_i_[i] = fold(i, om.i0, om.i1);
    for (int j = 0; j <= g.ny; ++j) fold_j_[j] = fold(j, om.j0, om.j1);

    const double rw = 0.9 * g.dom.l;  // cutoff reaches 0 before the Omega2 boundary
    cut_x_ = PlateauProfile{0.0, g.dom.L, rw, rw};
    cut_y_ = PlateauProfile{0.0, g.dom.W, rw, rw};
    cut_.assign([this](double x, double y) { return cut_x_(x) * cut_y_(y); });
}

void ExtensionOp::apply(const ScalarField& f, ScalarField& out) const {
    for (int j = 0; j <= g_.ny; ++j)
        for (int i = 0; i <= g_.nx; ++i)
            out.at(i, j) = cut_.at(i, j) * f.at(fold_i_[i], fold_j_[j]);
}

void ExtensionOp::apply(const VectorField& f, VectorField& out) const {
    apply(f.x(), out.x());
    apply(f.y(), out.y());
}

double measure_extension_norm(const GridSpec& g, int order, int m, double alpha) {
    if (order != 1 && order != 2) throw std::invalid_argument("measure_extension_norm: order in {1,2}");
    const DomainSpec& d = g.dom;
    const double pi = 3.14159265358979323846;
    auto xi1 = [&](double x) { return x / d.L; };
    auto xi2 = [&](double y) { return y / d.W; };
    std::vector<std::function<double(double, double)>> probes = {
        [&](double, double) { return 1.0; },
        [&](double x, double) { return xi1(x); },
        [&](double, double y) { return xi2(y); },
        [&](double x, double y) { return std::sin(pi * xi1(x)) * std::sin(pi * xi2(y)); },
        [&](double x, double y) { return std::cos(pi * xi1(x)) * std::cos(2 * pi * xi2(y)); },
        [&](double x, double y) { return xi1(x) * xi2(y) * (1 - xi1(x)); },
    };
    ExtensionOp ext(g);
    double cmax = 0.0;
    if (order == 1) {
        for (auto& p : probes) {
            ScalarField f(g);
            f.assign(p);
            ScalarField e = ext.apply(f);
            double num = holder_norm(e, m, alpha, Subdomain::Omega3).value;
            double den = holder_norm(f, m, alpha, Subdomain::Omega).value;
            if (den > 0) cmax = std::max(cmax, num / den);
        }
    } else {
        for (std::size_t a = 0; a < probes.size(); ++a) {
            VectorField f(g);
            f.assign(probes[a], probes[(a + 2) % probes.size()]);
            VectorField e = ext.apply(f);
            double num = holder_norm(e, m, alpha, Subdomain::Omega3).value;
            double den = holder_norm(f, m, alpha, Subdomain::Omega).value;
            if (den > 0) cmax = std::max(cmax, num / den);
        }
    }
    return cmax;
}

}  // namespace mhdctrl
