#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

using namespace mhdctrl;

namespace {

const double PI = 3.14159265358979323846;

GridSpec duct(int nx, int ny, int nt) {
    return GridSpec::make(build_domains(2.0, 1.0, 0.5), nx, ny, nt);
}

double dirichlet_error(const GridSpec& g) {
    DirichletPoisson solver(g, Subdomain::Omega1);
    const Rect o1 = g.dom.omega1();
    auto exact = [&](double x, double y) {
        return std::sin(PI * (x - o1.xa) / o1.width()) * std::sin(PI * (y - o1.ya) / o1.height());
    };
    const double kx = PI / o1.width(), ky = PI / o1.height();
    ScalarField rhs(g);
    rhs.assign([&](double x, double y) { return (kx * kx + ky * ky) * exact(x, y); });
    ScalarField phi(g);
    solver.solve(rhs, phi);
    CHECK(solver.residual(rhs, phi) <= 1e-10 * rhs.max_abs());
    double err = 0.0;
    const IndexBox b = solver.box();
    for (int j = b.j0; j <= b.j1; ++j)
        for (int i = b.i0; i <= b.i1; ++i)
            err = std::max(err, std::abs(phi.at(i, j) - exact(g.x_of(i), g.y_of(j))));
    return err;
}

double neumann_error(const GridSpec& g) {
    NeumannPoisson solver(g, Subdomain::Omega);
    const double L = g.dom.L;
    auto exact = [&](double x, double) { return std::cos(PI * x / L); };
    ScalarField rhs(g);
    rhs.assign([&](double x, double y) { return -(PI / L) * (PI / L) * exact(x, y); });
    ScalarField q = solver.solve(rhs, NeumannTrace::zeros(solver.box()));
    const IndexBox b = solver.box();
    // both are zero-mean over Omega; compare directly
    double err = 0.0;
    for (int j = b.j0; j <= b.j1; ++j)
        for (int i = b.i0; i <= b.i1; ++i)
            err = std::max(err, std::abs(q.at(i, j) - exact(g.x_of(i), g.y_of(j))));
    return err;
}

double transport_error(const GridSpec& g) {
    // smooth rotating-cell advection: a = perp_grad(Psi) is tangent at the
    // Omega3 boundary since Psi vanishes there
    const Rect o3 = g.dom.omega3();
    auto stream = [&](double x, double y) {
        double X = (x - o3.xa) / o3.width(), Y = (y - o3.ya) / o3.height();
        return 0.35 * std::sin(PI * X) * std::sin(PI * Y);
    };
    auto a1 = [&](double x, double y) {
        double X = (x - o3.xa) / o3.width(), Y = (y - o3.ya) / o3.height();
        return 0.35 * (PI / o3.height()) * std::sin(PI * X) * std::cos(PI * Y);
    };
    auto a2 = [&](double x, double y) {
        double X = (x - o3.xa) / o3.width(), Y = (y - o3.ya) / o3.height();
        return -0.35 * (PI / o3.width()) * std::cos(PI * X) * std::sin(PI * Y);
    };
    (void)stream;
    auto exact = [&](double x, double y, double t) {
        return std::sin(1.5 * x - 0.8 * t) * std::cos(1.1 * y + 0.5 * t);
    };
    VectorSeries advect = make_vector_series(g);
    ScalarSeries source(std::size_t(g.nt) + 1, ScalarField(g));
    for (int k = 0; k <= g.nt; ++k) {
        const double t = g.t_of(k);
        advect[k].assign(a1, a2);
        source[k].assign([&](double x, double y) {
            double dt_term = -0.8 * std::cos(1.5 * x - 0.8 * t) * std::cos(1.1 * y + 0.5 * t) -
                             0.5 * std::sin(1.5 * x - 0.8 * t) * std::sin(1.1 * y + 0.5 * t);
            double gx = 1.5 * std::cos(1.5 * x - 0.8 * t) * std::cos(1.1 * y + 0.5 * t);
            double gy = -1.1 * std::sin(1.5 * x - 0.8 * t) * std::sin(1.1 * y + 0.5 * t);
            return dt_term + a1(x, y) * gx + a2(x, y) * gy;
        });
    }
    ScalarField j0(g);
    j0.assign([&](double x, double y) { return exact(x, y, 0.0); });
    ScalarSeries j = transport_solve(j0, advect, source);
    double err = 0.0;
    for (int jj = 0; jj <= g.ny; ++jj)
        for (int i = 0; i <= g.nx; ++i)
            err = std::max(err, std::abs(j[g.nt].at(i, jj) - exact(g.x_of(i), g.y_of(jj), 1.0)));
    return err;
}

}  // namespace

TEST_CASE("dirichlet solver: zero, linearity, manufactured convergence") {
    GridSpec g = duct(64, 32, 32);
    DirichletPoisson solver(g, Subdomain::Omega1);
    ScalarField zero(g), phi(g);
    solver.solve(zero, phi);
    CHECK(phi.max_abs() == 0.0);

    VectorField rnd = mhdctrl::testing::random_smooth_field(g, 5);
    ScalarField r1 = rnd.x(), r2 = rnd.y();
    ScalarField pa(g), pb(g), pc(g);
    solver.solve(r1, pa);
    solver.solve(r2, pb);
    ScalarField comb = r1;
    comb *= 3.25;
    comb += r2;
    solver.solve(comb, pc);
    for (std::size_t k = 0; k < pc.size(); ++k)
        CHECK(pc.data()[k] ==
              doctest::Approx(3.25 * pa.data()[k] + pb.data()[k]).epsilon(1e-12).scale(1.0));

    double e1 = dirichlet_error(duct(64, 32, 32));
    double e2 = dirichlet_error(duct(128, 64, 32));
    double e3 = dirichlet_error(duct(256, 128, 32));
    double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
    CHECK(o1 == doctest::Approx(2.0).epsilon(0.1));
    CHECK(o2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("neumann solver: zero data, zero mean, manufactured convergence") {
    GridSpec g = duct(64, 32, 32);
    NeumannPoisson solver(g, Subdomain::Omega);
    ScalarField zero(g);
    ScalarField q = solver.solve(zero, NeumannTrace::zeros(solver.box()));
    CHECK(q.max_abs() <= 1e-14);

    // zero-mean normalization
    ScalarField rhs(g);
    rhs.assign([&](double x, double y) { return std::cos(PI * x / g.dom.L) * (1 + 0.2 * y * 0); });
    ScalarField s = solver.solve(rhs, NeumannTrace::zeros(solver.box()));
    const IndexBox b = solver.box();
    double mean = 0.0, wsum = 0.0;
    for (int j = b.j0; j <= b.j1; ++j)
        for (int i = b.i0; i <= b.i1; ++i) {
            double w = ((i == b.i0 || i == b.i1) ? 0.5 : 1.0) * ((j == b.j0 || j == b.j1) ? 0.5 : 1.0);
            mean += w * s.at(i, j);
            wsum += w;
        }
    CHECK(std::abs(mean / wsum) <= 1e-12 * std::max(1.0, s.max_abs()));

    double e1 = neumann_error(duct(64, 32, 32));
    double e2 = neumann_error(duct(128, 64, 32));
    double e3 = neumann_error(duct(256, 128, 32));
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.15));
    CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("neumann solver flags incompatible data") {
    GridSpec g = duct(64, 32, 32);
    NeumannPoisson solver(g, Subdomain::Omega);
    NeumannTrace t = NeumannTrace::zeros(solver.box());
    for (double& v : t.left) v = 1.0;  // net influx with zero rhs
    ScalarField zero(g);
    CHECK_THROWS_AS(solver.solve(zero, t, 1e-6), numerical_error);
}

TEST_CASE("transport: translation by a constant field") {
    GridSpec g = duct(96, 48, 96);
    // constant advecting field windowed to keep the Omega3 boundary untouched
    ReturnProfile prof = ReturnProfile::make(g.dom, 1.0);
    VectorSeries advect = make_vector_series(g);
    for (auto& s : advect)
        s.assign([&](double x, double y) { return 0.8 * prof.chi(x, y); },
                 [](double, double) { return 0.0; });
    ScalarSeries zero_src(std::size_t(g.nt) + 1, ScalarField(g));
    ScalarField j0(g);
    j0.assign([&](double x, double y) {
        double r = std::hypot((x - 0.4) / 0.4, (y - 0.5) / 0.4);
        return r < 1.0 ? std::pow(std::cos(0.5 * PI * r), 4.0) : 0.0;
    });
    ScalarSeries j = transport_solve(j0, advect, zero_src);
    double err = 0.0;
    for (int jj = 0; jj <= g.ny; ++jj)
        for (int i = 0; i <= g.nx; ++i) {
            double x = g.x_of(i);
            if (x - 0.8 < g.dom.omega2().xa || x > g.dom.omega2().xb) continue;
            err = std::max(err, std::abs(j[g.nt].at(i, jj) - j0.sample(x - 0.8, g.y_of(jj))));
        }
    CHECK(err <= 5e-4);

    // range preservation along characteristics
    double lo = 0.0, hi = 0.0;
    for (const auto& s : j) {
        for (std::size_t k = 0; k < s.size(); ++k) {
            lo = std::min(lo, s.data()[k]);
            hi = std::max(hi, s.data()[k]);
        }
    }
    CHECK(lo >= -1e-3);
    CHECK(hi <= 1.0 + 1e-3);
}

TEST_CASE("transport: space-independent source integrates in time") {
    GridSpec g = duct(48, 24, 64);
    VectorSeries advect = make_vector_series(g);  // rest
    ScalarSeries src(std::size_t(g.nt) + 1, ScalarField(g));
    for (int k = 0; k <= g.nt; ++k) src[k].fill(std::cos(2.0 * g.t_of(k)));
    ScalarField j0(g);
    ScalarSeries j = transport_solve(j0, advect, src);
    // the panel quadrature samples linear-in-time blends of the source, so
    // the accuracy floor is dt^2
    const double tol = 2.0 * g.dt * g.dt;
    for (int k = 0; k <= g.nt; ++k) {
        double expected = 0.5 * std::sin(2.0 * g.t_of(k));
        CHECK(std::abs(j[k].at(g.nx / 2, g.ny / 2) - expected) <= tol);
    }
}

TEST_CASE("transport: manufactured solution converges at second order") {
    double e1 = transport_error(duct(48, 24, 64));
    double e2 = transport_error(duct(96, 48, 128));
    double order = std::log2(e1 / e2);
    CHECK(order == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("div-curl reconstruction") {
    GridSpec g = duct(64, 32, 64);
    ReturnProfile prof = ReturnProfile::make(g.dom, 7.5);
    const IndexBox b1 = g.box_omega1();

    // j = 0, z0 = 0, plateau time: the reconstruction is the return field
    ScalarField zeroj(g);
    VectorField zerov(g);
    VectorField z = div_curl_reconstruct(zeroj, zerov, 0.5, prof, g);
    for (int j = b1.j0; j <= b1.j1; ++j)
        for (int i = b1.i0; i <= b1.i1; ++i) {
            CHECK(z.x().at(i, j) == doctest::Approx(7.5).epsilon(1e-14));
            CHECK(z.y().at(i, j) == 0.0);
        }

    // curl of the reconstruction reproduces j in the interior
    ScalarField j0(g);
    j0.assign([&](double x, double y) {
        return std::sin(1.3 * x) * std::cos(0.9 * y);
    });
    VectorField zr = div_curl_reconstruct(j0, zerov, 0.5, prof, g);
    ScalarField curl = curl2d_box(zr, b1);
    double err = 0.0;
    for (int j = b1.j0 + 2; j <= b1.j1 - 2; ++j)
        for (int i = b1.i0 + 2; i <= b1.i1 - 2; ++i)
            err = std::max(err, std::abs(curl.at(i, j) - j0.at(i, j)));
    CHECK(err <= 20.0 * g.hmax() * g.hmax());

    // at t = 1 with vanishing vorticity the reconstruction is at rest
    VectorField zfin = div_curl_reconstruct(zeroj, zerov, 1.0, prof, g);
    CHECK(zfin.x().max_abs() == 0.0);
    CHECK(zfin.y().max_abs() == 0.0);

    // boundary normal trace matches the prescribed one (wall rows: zero)
    for (int i = b1.i0; i <= b1.i1; ++i) {
        CHECK(zr.y().at(i, b1.j0) == 0.0);
        CHECK(zr.y().at(i, b1.j1) == 0.0);
    }
}

TEST_CASE("leray projection removes gradient parts") {
    GridSpec g = duct(64, 32, 32);
    VectorField u = mhdctrl::testing::random_smooth_field(g, 11);
    // contaminate with a gradient whose total boundary flux vanishes
    ScalarField p(g);
    p.assign([&](double x, double y) {
        return 0.3 * std::sin(PI * x / g.dom.L) * std::cos(PI * y / g.dom.W);
    });
    const IndexBox b = g.box_omega();
    ScalarField px(g), py(g);
    ddx_box(p, b, px);
    ddy_box(p, b, py);
    VectorField v = u;
    for (int j = b.j0; j <= b.j1; ++j)
        for (int i = b.i0; i <= b.i1; ++i) {
            v.x().at(i, j) += px.at(i, j);
            v.y().at(i, j) += py.at(i, j);
        }
    double before = div2d_box(v, b).max_abs_box(b);
    leray_project_omega(v);
    double after = div2d_box(v, b).max_abs_box(b);
    // the compact solve against the wide divergence-of-gradient leaves an
    // O(h) boundary-row residue of the removed gradient
    CHECK(after <= 0.3 * before);
}
