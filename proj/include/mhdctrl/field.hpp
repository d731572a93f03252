/// @file field.hpp
/// @brief Grid-sampled scalar and vector fields on the Omega3 node grid,
///        with Catmull-Rom bicubic off-node evaluation.

#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <vector>

#include "mhdctrl/grid.hpp"

namespace mhdctrl {

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0)
        : g_(g), v_(g.nodes(), fill) {}

    const GridSpec& grid() const { return g_; }

    double& at(int i, int j) { return v_[std::size_t(j) * g_.npx() + i]; }
    double at(int i, int j) const { return v_[std::size_t(j) * g_.npx() + i]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::size_t size() const { return v_.size(); }

    void fill(double c) { std::fill(v_.begin(), v_.end(), c); }

    /// Samples an analytic function at every node.
    template <class F>
    void assign(F&& f) {
        for (int j = 0; j <= g_.ny; ++j) {
            double y = g_.y_of(j);
            for (int i = 0; i <= g_.nx; ++i) v_[std::size_t(j) * g_.npx() + i] = f(g_.x_of(i), y);
        }
    }

    double max_abs() const {
        double m = 0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }

    double max_abs_box(const IndexBox& b) const {
        double m = 0;
        for (int j = b.j0; j <= b.j1; ++j)
            for (int i = b.i0; i <= b.i1; ++i) m = std::max(m, std::abs(at(i, j)));
        return m;
    }

    bool all_finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    /// Bicubic (4-point Lagrange per axis) interpolation; stencils shift
    /// inward at the grid edges, coordinates outside closure(Omega3) clamp.
    double sample(double x, double y) const { return sample_raw(v_.data(), x, y); }

    double sample_raw(const double* p, double x, double y) const {
        const int npx = g_.npx();
        double sx = (x - g_.x0) / g_.hx;
        double sy = (y - g_.y0) / g_.hy;
        sx = std::min(std::max(sx, 0.0), double(g_.nx));
        sy = std::min(std::max(sy, 0.0), double(g_.ny));
        int i0, j0;
        double wx[4], wy[4];
        lag_weights(sx, g_.nx, i0, wx);
        lag_weights(sy, g_.ny, j0, wy);
        double acc = 0;
        for (int b = 0; b < 4; ++b) {
            const double* row = p + std::size_t(j0 + b) * npx + i0;
            acc += wy[b] * (wx[0] * row[0] + wx[1] * row[1] + wx[2] * row[2] + wx[3] * row[3]);
        }
        return acc;
    }

    ScalarField& operator+=(const ScalarField& o) {
        for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
        return *this;
    }
    ScalarField& operator*=(double a) {
        for (double& x : v_) x *= a;
        return *this;
    }

private:
    // cubic Lagrange weights through 4 consecutive nodes starting at i0
    static void lag_weights(double s, int n, int& i0, double w[4]) {
        int i = int(s);
        if (i > n - 1) i = n - 1;
        i0 = i - 1;
        if (i0 < 0) i0 = 0;
        if (i0 > n - 3) i0 = n - 3;
        const double u = s - i0;
        const double u1 = u - 1.0, u2 = u - 2.0, u3 = u - 3.0;
        w[0] = -u1 * u2 * u3 / 6.0;
        w[1] = u * u2 * u3 * 0.5;
        w[2] = -u * u1 * u3 * 0.5;
        w[3] = u * u1 * u2 / 6.0;
    }

    GridSpec g_;
    std::vector<double> v_;
};

class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const GridSpec& g, double fx = 0.0, double fy = 0.0)
        : c1_(g, fx), c2_(g, fy) {}

    const GridSpec& grid() const { return c1_.grid(); }

    ScalarField& x() { return c1_; }
    ScalarField& y() { return c2_; }
    const ScalarField& x() const { return c1_; }
    const ScalarField& y() const { return c2_; }

    template <class F1, class F2>
    void assign(F1&& f1, F2&& f2) {
        c1_.assign(f1);
        c2_.assign(f2);
    }

    double max_abs() const { return std::max(c1_.max_abs(), c2_.max_abs()); }

    void sample(double x, double y, double& vx, double& vy) const {
        vx = c1_.sample(x, y);
        vy = c2_.sample(x, y);
    }

    VectorField& operator+=(const VectorField& o) {
        c1_ += o.c1_;
        c2_ += o.c2_;
        return *this;
    }
    VectorField& operator-=(const VectorField& o) {
        c1_ -= o.c1_;
        c2_ -= o.c2_;
        return *this;
    }
    VectorField& operator*=(double a) {
        c1_ *= a;
        c2_ *= a;
        return *this;
    }

private:
    ScalarField c1_, c2_;
};

/// Time-indexed fields on the controller grid: slice k lives at t = k*dt.
using ScalarSeries = std::vector<ScalarField>;
using VectorSeries = std::vector<VectorField>;

inline ScalarSeries make_scalar_series(const GridSpec& g) {
    return ScalarSeries(std::size_t(g.nt) + 1, ScalarField(g));
}
inline VectorSeries make_vector_series(const GridSpec& g) {
    return VectorSeries(std::size_t(g.nt) + 1, VectorField(g));
}

/// slice_a*(1-th) + slice_b*th, written into out (all on the same grid).
inline void blend_into(const ScalarField& a, const ScalarField& b, double th, ScalarField& out) {
    const double* pa = a.data();
    const double* pb = b.data();
    double* po = out.data();
    const std::size_t n = a.size();
    const double w0 = 1.0 - th;
    for (std::size_t k = 0; k < n; ++k) po[k] = w0 * pa[k] + th * pb[k];
}

inline void blend_into(const VectorField& a, const VectorField& b, double th, VectorField& out) {
    blend_into(a.x(), b.x(), th, out.x());
    blend_into(a.y(), b.y(), th, out.y());
}

}  // namespace mhdctrl
