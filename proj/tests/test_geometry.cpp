#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mhdctrl/flow.hpp"
#include "test_support.hpp"

using namespace mhdctrl;

TEST_CASE("build_domains nesting and extensions") {
    DomainSpec d = build_domains(2.0, 1.0, 0.5);
    Rect o2 = d.omega2();
    CHECK(o2.xa == doctest::Approx(-0.5));
    CHECK(o2.xb == doctest::Approx(2.5));
    CHECK(o2.ya == doctest::Approx(-0.5));
    CHECK(o2.yb == doctest::Approx(1.5));
    // Omega1 stays within the horizontal strip 0 <= y <= W
    CHECK(d.omega1().ya == 0.0);
    CHECK(d.omega1().yb == d.W);

    CHECK_THROWS_AS(build_domains(-1.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_domains(1.0, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("domain containment on every grid node") {
    DomainSpec d = build_domains(1.0, 1.0, 0.25);
    GridSpec g = GridSpec::make(d, 32, 32, 16);
    const Rect o = d.omega(), o1 = d.omega1(), o2 = d.omega2(), o3 = d.omega3();
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            double x = g.x_of(i), y = g.y_of(j);
            if (o.contains(x, y)) CHECK(o1.contains(x, y));
            if (o1.contains(x, y)) CHECK(o2.contains(x, y));
            if (o2.contains(x, y)) CHECK(o3.contains_open(x, y));
        }
}

TEST_CASE("grid spacing divides every rectangle edge") {
    DomainSpec d = build_domains(2.0, 1.0, 0.5);
    GridSpec g = GridSpec::make(d, 128, 64, 256);
    CHECK(g.nx == 128);
    CHECK(g.ny >= 64);  // snapped up so hy divides W and l
    for (auto r : {d.omega(), d.omega1(), d.omega2(), d.omega3()}) CHECK_NOTHROW(g.box(r));
    IndexBox b = g.box_omega();
    CHECK(g.x_of(b.i0) == doctest::Approx(0.0));
    CHECK(g.x_of(b.i1) == doctest::Approx(d.L));
}

TEST_CASE("gamma, chi, lambda profiles") {
    DomainSpec d = build_domains(2.0, 1.0, 0.5);
    ReturnProfile p = ReturnProfile::make(d, 7.5);
    GridSpec g = GridSpec::make(d, 48, 24, 64);

    for (int k = 0; k <= g.nt; ++k) {
        double t = g.t_of(k);
        CHECK(p.gamma(t) >= 0.0);
        if (t >= 0.25 && t <= 0.75) CHECK(p.gamma(t) == doctest::Approx(7.5).epsilon(1e-15));
        if (t <= 0.125 || t >= 0.875) CHECK(p.gamma(t) == 0.0);
        if (t <= p.lambda_d) CHECK(p.lambda(t) == 1.0);
        if (t >= 2 * p.lambda_d) CHECK(p.lambda(t) == 0.0);
    }
    // lambda monotone
    for (int k = 1; k <= g.nt; ++k) CHECK(p.lambda(g.t_of(k)) <= p.lambda(g.t_of(k - 1)) + 1e-15);

    const Rect o2 = d.omega2(), o3 = d.omega3();
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            double x = g.x_of(i), y = g.y_of(j);
            double c = p.chi(x, y);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
            if (o2.contains(x, y)) CHECK(c == 1.0);
            // support margin: zero within chi_margin of the Omega3 boundary
            if (x <= o3.xa + p.chi_margin || x >= o3.xb - p.chi_margin ||
                y <= o3.ya + p.chi_margin || y >= o3.yb - p.chi_margin)
                CHECK(c == 0.0);
        }
}

TEST_CASE("y_star evaluation") {
    DomainSpec d = build_domains(2.0, 1.0, 0.5);
    ReturnProfile p = ReturnProfile::make(d, 7.5);
    double vx, vy;
    y_star(p, 1.0, 0.5, 0.5, vx, vy);  // x in Omega2 closure, plateau time
    CHECK(vx == doctest::Approx(7.5).epsilon(1e-15));
    CHECK(vy == 0.0);
    y_star(p, 1.0, 0.5, 0.0, vx, vy);
    CHECK(vx == 0.0);
    y_star(p, d.omega3().xa, 0.0, 0.5, vx, vy);  // on the Omega3 boundary
    CHECK(vx == 0.0);
    CHECK_THROWS_AS(y_star(p, d.omega3().xb + 0.1, 0.5, 0.5, vx, vy), std::domain_error);
}

TEST_CASE("choose_M formula floor and flushing") {
    DomainSpec d = build_domains(2.0, 1.0, 0.5);
    CHECK(choose_M_initial(d) == doctest::Approx(7.5));
    // plateau displacement covers the extended strip
    CHECK(choose_M_initial(d) * 0.5 >= d.L + 2 * d.l);
    DomainSpec tiny = build_domains(1.0, 1.0, 1e-6);
    CHECK(choose_M_initial(tiny) >= 2.5);

    GridSpec g = GridSpec::make(d, 48, 24, 64);
    double M = choose_M(d, g);
    CHECK(M == doctest::Approx(7.5));  // the first candidate already flushes
    ReturnProfile p = ReturnProfile::make(d, M);
    ComboField f(p);
    FlowMap map = FlowMap::from_combo(&f, g, g.dt / 4.0);
    FlushReport rep = flush_check(map, d);
    CHECK(rep.ok);
    CHECK(rep.margin > 0.0);
}

TEST_CASE("weight values and the trick bound") {
    CHECK(weight_eval(0.0, 8) == doctest::Approx(256.0).epsilon(1e-14));
    CHECK(weight_eval(1.0, 8) == doctest::Approx(std::pow(1.6, 8)).epsilon(1e-14));
    CHECK(weight_eval(0.0, 4) == doctest::Approx(16.0).epsilon(1e-14));

    for (double k : {4.0, 8.0, 16.0, 32.0}) {
        double bound = weight_trick_bound(k);
        CHECK(bound <= 5.0 / (2 * k + 1));
        // quadrature against the closed form
        double exact = weight_eval(0.0, k) * weight_inv_sq_integral_exact(k);
        CHECK(std::abs(bound - exact) <= 1e-10);
    }
    CHECK(weight_trick_bound(8) <= 5.0 / 17.0);

    // decay of omega_k(t) int_0^t omega_k^{-1} as k doubles, at fixed t
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
        double prev = weight_decay_value(t, 4);
        for (double k : {8.0, 16.0, 32.0}) {
            double cur = weight_decay_value(t, k);
            CHECK(cur <= prev + 1e-15);
            prev = cur;
        }
    }
}

TEST_CASE("weight is decreasing and above one") {
    for (double k : {4.0, 8.0, 32.0}) {
        double prev = weight_eval(0.0, k);
        for (int i = 1; i <= 64; ++i) {
            double w = weight_eval(i / 64.0, k);
            CHECK(w > 1.0);
            CHECK(w < prev);
            prev = w;
        }
    }
}

TEST_CASE("return profile rejects bad parameters") {
    DomainSpec d = build_domains(1.0, 1.0, 0.25);
    CHECK_THROWS_AS(ReturnProfile::make(d, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ReturnProfile::make(d, 1.0, 0.6), std::invalid_argument);
}
