#include "mhdctrl/data.hpp"

#include <cmath>
#include <random>

namespace mhdctrl {

VectorField field_from_stream(const GridSpec& g, const std::vector<StreamMode>& modes) {
    const double pi = 3.14159265358979323846;
    const double L = g.dom.L, W = g.dom.W;
    ScalarField psi(g);
    psi.assign([&](double x, double y) {
        const double ty = y / W;
        double v = 0.0;
        for (const StreamMode& md : modes) {
            const double kx = md.m * pi / L, ky = md.n * pi / W;
            const double X = md.a_cos * std::cos(kx * x) + md.a_sin * std::sin(kx * x);
            const double sy = (ty == std::floor(ty)) ? 0.0 : std::sin(ky * y);
            v += X * sy;
        }
        return v;
    });
    // discrete perp-grad over the Omega box: the difference operators commute,
    // so the data is divergence-free to rounding and exactly wall-tangent
    const IndexBox b = g.box_omega();
    VectorField u(g);
    ddy_box(psi, b, u.x());
    ddx_box(psi, b, u.y());
    for (int j = b.j0; j <= b.j1; ++j)
        for (int i = b.i0; i <= b.i1; ++i) u.y().at(i, j) = -u.y().at(i, j);
    return u;
}

VectorField random_stream_field(const GridSpec& g, std::uint64_t seed, int max_m, int max_n,
                                double amp) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<StreamMode> modes;
    for (int m = 0; m <= max_m; ++m)
        for (int n = 1; n <= max_n; ++n) modes.push_back({m, n, uni(rng), m == 0 ? 0.0 : uni(rng)});
    VectorField u = field_from_stream(g, modes);
    const IndexBox b = u.grid().box_omega();
    double sup = 0.0;
    for (int j = b.j0; j <= b.j1; ++j)
        for (int i = b.i0; i <= b.i1; ++i)
            sup = std::max(sup, std::hypot(u.x().at(i, j), u.y().at(i, j)));
    if (sup > 0) u *= amp / sup;
    return u;
}

double div_tol_omega(const VectorField& v) {
    const GridSpec& g = v.grid();
    const IndexBox b = g.box_omega();
    double maxnorm = std::max(v.x().max_abs_box(b), v.y().max_abs_box(b));
    const double h = g.hmax();
    return 10.0 * h * h * std::max(maxnorm, 1e-30);
}

void admit_initial_data(VectorField& z0) {
    const GridSpec& g = z0.grid();
    const IndexBox b = g.box_omega();
    const double tol = div_tol_omega(z0);

    double wall = 0.0;
    for (int i = b.i0; i <= b.i1; ++i)
        wall = std::max({wall, std::abs(z0.y().at(i, b.j0)), std::abs(z0.y().at(i, b.j1))});
    if (wall > tol)
        throw config_error("initial data: wall-normal component beyond div_tol on Gamma\\Gamma0");

    double dres = div2d_box(z0, b).max_abs_box(b);
    if (dres > tol) throw config_error("initial data: divergence residue beyond div_tol");
    if (dres > 0.05 * tol) leray_project_omega(z0);

    for (int i = b.i0; i <= b.i1; ++i) {
        z0.y().at(i, b.j0) = 0.0;
        z0.y().at(i, b.j1) = 0.0;
    }
}

}  // namespace mhdctrl
