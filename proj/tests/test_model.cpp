#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gkdv/model.hpp"

using namespace gkdv;

TEST_CASE("nonlinear_flux pointwise values") {
    Field z(64, 0.0);
    for (double v : nonlinear_flux(z, 2)) CHECK(v == 0.0);

    Field two(64, 2.0);
    for (double v : nonlinear_flux(two, 1)) CHECK(v == Catch::Approx(2.0));

    CHECK_THROWS_AS(nonlinear_flux(two, 4), ConfigError);
}

TEST_CASE("divergence of the flux equals u^k u_x on smooth fields") {
    GridSpec g = build_grid(1.0, 65);
    BandedOperator d1 = d_op(g, 1, {});
    Field u = sample(g, [](double x) { return x; });
    Field fl = nonlinear_flux(u, 2);  // x^3/3
    Field dfl = d1.apply(fl);
    const int mid = 32;  // x = 0.5
    CHECK(g.x(mid) == Catch::Approx(0.5));
    // centered first difference of x^3/3 carries a f''' dx^2 / 6 truncation term
    CHECK(dfl[mid] == Catch::Approx(0.25).margin(g.dx * g.dx));
}

TEST_CASE("conservative and pointwise nonlinear forms agree at second order") {
    auto mismatch = [](int n) {
        GridSpec g = build_grid(10.0, n);
        BandedOperator d1 = d_op(g, 1, {});
        Field u = sample(g, [](double x) { return x * std::exp(-x); });
        Field fl = nonlinear_flux(u, 2);
        Field dfl = d1.apply(fl);
        Field ux = d1.apply(u);
        double worst = 0.0;
        for (int j = 0; j < n; ++j) {
            const double point = u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)] *
                                 ux[static_cast<std::size_t>(j)];
            worst = std::max(worst, std::fabs(dfl[static_cast<std::size_t>(j)] - point));
        }
        return worst;
    };
    const double e1 = mismatch(201), e2 = mismatch(401);
    CHECK(e1 / e2 > 3.0);
}

TEST_CASE("rhs of the zero state vanishes") {
    GridSpec g = build_grid(10.0, 129);
    OperatorSet ops = make_operator_set(g, 0.0);
    SolverParams p;
    p.k = 1;
    FieldState s{Field(static_cast<std::size_t>(g.n_nodes), 0.0), 0.0};
    for (double v : rhs(s, p, ops)) CHECK(v == 0.0);
}

TEST_CASE("rhs matches the analytic -(u^k u_x + u_xxx) for a closed-form bump") {
    // u = x e^{-x}: u_x=(1-x)e^{-x}, u_xxx=(3-x)e^{-x}
    auto worst_err = [](int n) {
        GridSpec g = build_grid(20.0, n);
        OperatorSet ops = make_operator_set(g, 0.0);
        SolverParams p;
        p.k = 1;
        FieldState s{sample(g, [](double x) { return x * std::exp(-x); }), 0.0};
        s.u[0] = 0.0;
        Field y = rhs(s, p, ops);
        double worst = 0.0;
        for (int j = 2; j < n - 2; ++j) {
            const double x = g.x(j), e = std::exp(-x);
            const double exact = -(x * e * (1.0 - x) * e + (3.0 - x) * e);
            worst = std::max(worst, std::fabs(y[static_cast<std::size_t>(j)] - exact));
        }
        return worst;
    };
    const double e1 = worst_err(401), e2 = worst_err(801);
    CHECK(e1 < 2.5e-3);
    CHECK(e1 / e2 > 3.0);  // second order
}

TEST_CASE("eps contributes eps * 120 through the fifth derivative of x^5") {
    GridSpec g = build_grid(2.0, 129);
    OperatorSet ops = make_operator_set(g, 1.0);
    SolverParams p1;
    p1.k = 1;
    p1.eps = 1.0;
    SolverParams p0 = p1;
    p0.eps = 0.0;
    FieldState s{sample(g, [](double x) { return std::pow(x, 5); }), 0.0};
    // the rhs difference between eps=1 and eps=0 isolates the eps*D5 term
    Field y1 = rhs(s, p1, ops);
    Field y0 = rhs(s, p0, ops);
    const int j = 64;
    CHECK(y1[static_cast<std::size_t>(j)] - y0[static_cast<std::size_t>(j)] ==
          Catch::Approx(120.0).epsilon(1e-6));
}

TEST_CASE("rhs flips sign with u when k is even") {
    GridSpec g = build_grid(10.0, 201);
    OperatorSet ops = make_operator_set(g, 0.0);
    SolverParams p;
    p.k = 2;
    FieldState s{sample(g, [](double x) { return x * std::exp(-x) * std::sin(x); }), 0.0};
    s.u[0] = 0.0;
    Field y = rhs(s, p, ops);
    FieldState sm = s;
    for (auto& v : sm.u) v = -v;
    Field ym = rhs(sm, p, ops);
    for (std::size_t j = 0; j < y.size(); ++j)
        CHECK(ym[j] == Catch::Approx(-y[j]).margin(1e-12));
}

TEST_CASE("rhs rejects fields violating u(0)=0") {
    GridSpec g = build_grid(10.0, 129);
    OperatorSet ops = make_operator_set(g, 0.0);
    SolverParams p;
    FieldState s{Field(static_cast<std::size_t>(g.n_nodes), 1.0), 0.0};
    CHECK_THROWS_AS(rhs(s, p, ops), ConfigError);
}

TEST_CASE("solver parameter validation") {
    SolverParams p;
    p.k = 4;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.k = 1;
    p.eps = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.eps = 0.0;
    p.dt = 2.0;
    p.T = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.dt = 1e-3;
    CHECK_NOTHROW(p.validate());
    p.k = 3;
    CHECK(p.local_theory_regime());
}
