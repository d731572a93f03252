/// @file grid.hpp
/// @brief Rectangular duct geometry: the physical domain, its non-physical
///        extensions, and the uniform node grid covering the largest one.
///
/// The duct is Omega = (0,L) x (0,W) with controlled boundary Gamma0 on the
/// two vertical walls.  Around it sit three nested extensions used by the
/// construction:
///
///   Omega1 = (-l/2, L+l/2) x (0, W)         (div-curl reconstruction domain)
///   Omega2 = (-l,   L+l)   x (-l, W+l)      (support of all extensions)
///   Omega3 = (-2l,  L+2l)  x (-2l, W+2l)    (flow / transport domain)
///
/// All fields are sampled on the uniform node grid covering closure(Omega3).
/// Grid spacings are chosen so that every rectangle boundary above lies
/// exactly on grid lines.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mhdctrl {

struct Rect {
    double xa = 0, xb = 0, ya = 0, yb = 0;

    bool contains(double x, double y) const {
        return x >= xa && x <= xb && y >= ya && y <= yb;
    }
    bool contains_open(double x, double y) const {
        return x > xa && x < xb && y > ya && y < yb;
    }
    double width() const { return xb - xa; }
    double height() const { return yb - ya; }
};

struct DomainSpec {
    double L = 2.0;  // duct length (x extent of Omega)
    double W = 1.0;  // duct width  (y extent of Omega)
    double l = 0.5;  // extension margin

    Rect omega()  const { return {0.0, L, 0.0, W}; }
    Rect omega1() const { return {-0.5 * l, L + 0.5 * l, 0.0, W}; }
    Rect omega2() const { return {-l, L + l, -l, W + l}; }
    Rect omega3() const { return {-2.0 * l, L + 2.0 * l, -2.0 * l, W + 2.0 * l}; }
};

/// Builds the nested domains, rejecting non-positive dimensions.
inline DomainSpec build_domains(double L, double W, double l) {
    if (!(L > 0.0) || !(W > 0.0) || !(l > 0.0))
        throw std::invalid_argument("build_domains: L, W, l must be positive");
    return DomainSpec{L, W, l};
}

/// Inclusive node-index ranges of a sub-rectangle whose edges lie on grid lines.
struct IndexBox {
    int i0 = 0, i1 = 0, j0 = 0, j1 = 0;
    int ni() const { return i1 - i0 + 1; }
    int nj() const { return j1 - j0 + 1; }
};

struct GridSpec {
    DomainSpec dom;
    int nx = 0, ny = 0;     // cell counts over Omega3
    double hx = 0, hy = 0;  // spacings
    double x0 = 0, y0 = 0;  // lower-left node (= corner of Omega3)
    int nt = 0;             // time steps on [0,1]
    double dt = 0;

    int npx() const { return nx + 1; }  // nodes per row
    int npy() const { return ny + 1; }  // rows
    std::size_t nodes() const { return std::size_t(npx()) * std::size_t(npy()); }

    double x_of(int i) const { return x0 + i * hx; }
    double y_of(int j) const { return y0 + j * hy; }
    double t_of(int k) const { return k * dt; }

    /// Smallest grid cell counts >= the requested ones such that hx divides
    /// L, l and l/2 and hy divides W and l.  Keeps every Omega_i boundary on
    /// grid lines.
    static GridSpec make(const DomainSpec& d, int nx_request, int ny_request, int nt) {
        if (nx_request < 4 || ny_request < 4 || nt < 2)
            throw std::invalid_argument("GridSpec::make: grid too coarse");
        GridSpec g;
        g.dom = d;
        const double spanx = d.L + 4.0 * d.l;
        const double spany = d.W + 4.0 * d.l;
        // hx = (l/2)/m and must divide L;  hy = l/m' and must divide W.
        auto divides = [](double h, double len) {
            double r = len / h;
            return std::abs(r - std::round(r)) < 1e-9 * std::max(1.0, r);
        };
        int m = 1;
        for (;; ++m) {
            double hx = 0.5 * d.l / m;
            int nxc = int(std::round(spanx / hx));
            if (!divides(hx, spanx) || !divides(hx, d.L)) continue;
            if (nxc >= nx_request) {
                g.hx = spanx / nxc;
                g.nx = nxc;
                break;
            }
            if (m > 1000000) throw std::invalid_argument("GridSpec::make: no admissible hx");
        }
        for (m = 1;; ++m) {
            double hy = d.l / m;
            int nyc = int(std::round(spany / hy));
            if (!divides(hy, spany) || !divides(hy, d.W)) continue;
            if (nyc >= ny_request) {
                g.hy = spany / nyc;
                g.ny = nyc;
                break;
            }
            if (m > 1000000) throw std::invalid_argument("GridSpec::make: no admissible hy");
        }
        g.x0 = -2.0 * d.l;
        g.y0 = -2.0 * d.l;
        g.nt = nt;
        g.dt = 1.0 / nt;
        return g;
    }

    double hmax() const { return std::max(hx, hy); }

    /// Index box of a rectangle whose edges must lie on grid lines.
    IndexBox box(const Rect& r) const {
        auto snap = [](double v, double o, double h, const char* what) {
            double s = (v - o) / h;
            double rs = std::round(s);
            if (std::abs(s - rs) > 1e-7)
                throw std::invalid_argument(std::string("GridSpec::box: edge off grid lines: ") + what);
            return int(rs);
        };
        IndexBox b;
        b.i0 = snap(r.xa, x0, hx, "xa");
        b.i1 = snap(r.xb, x0, hx, "xb");
        b.j0 = snap(r.ya, y0, hy, "ya");
        b.j1 = snap(r.yb, y0, hy, "yb");
        return b;
    }

    IndexBox box_omega()  const { return box(dom.omega()); }
    IndexBox box_omega1() const { return box(dom.omega1()); }
    IndexBox box_omega2() const { return box(dom.omega2()); }
    IndexBox box_omega3() const { return IndexBox{0, nx, 0, ny}; }
};

enum class Subdomain { Omega, Omega1, Omega2, Omega3 };

inline IndexBox subdomain_box(const GridSpec& g, Subdomain s) {
    switch (s) {
        case Subdomain::Omega: return g.box_omega();
        case Subdomain::Omega1: return g.box_omega1();
        case Subdomain::Omega2: return g.box_omega2();
        default: return g.box_omega3();
    }
}

/// Errors raised by the numerical pipeline (mapped to CLI exit code 3).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Errors raised by configuration handling (exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Errors raised by verification replay (exit code 4).
struct verification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mhdctrl
