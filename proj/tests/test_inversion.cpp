#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "headwave/inversion.hpp"

using namespace headwave;

namespace {

FlatScene2D tanh_scene() {
    FlatScene2D s;
    s.u1 = Expr::parse("-(0.6+0.2*tanh(x))", {"x"});
    s.v1 = Expr::parse("0.6-0.2*tanh(x)", {"x"});
    s.profile.expr = Expr::parse("exp(-x^2)", {"x"});
    s.profile.support_lo = -6.0;
    s.profile.support_hi = 6.0;
    s.recon_lo = -3.0;
    s.recon_hi = 3.0;
    return s;
}

CurveScene arc_scene() {
    CurveScene s;
    s.gamma_x = Expr::parse("20*sin(t/20)", {"t"});
    s.gamma_y = Expr::parse("20*(1-cos(t/20))", {"t"});
    s.t_min = -8.0;
    s.t_max = 8.0;
    s.angle_u = Expr::parse("2.2+0.25*tanh(t)", {"t"});
    s.angle_v = Expr::parse("0.9-0.25*tanh(t)", {"t"});
    s.profile.expr = Expr::parse("exp(-x^2)", {"x"});
    s.profile.support_lo = -6.0;
    s.profile.support_hi = 6.0;
    s.tube_radius = 2.0;
    s.recon_lo = -3.0;
    s.recon_hi = 3.0;
    return s;
}

QuadOptions tight() {
    QuadOptions o;
    o.abs_tol = 1e-13;
    o.rel_tol = 1e-12;
    return o;
}

} // namespace

TEST_CASE("core node reproduces the hand-expanded formula") {
    CoreNode n;
    n.u1 = -0.45; n.v1 = 0.7; n.du1 = -0.11; n.dv1 = 0.05;
    n.g1p = 1.0; n.Dx = 0.8; n.Dd = -0.3;
    const double T = 1.5;
    const double a = 1.0 / n.u1 + 1.0 / n.v1;
    const double ap = -n.du1 / (n.u1 * n.u1) - n.dv1 / (n.v1 * n.v1);
    const double b = 1.0 / n.v1;
    const double bp = -n.dv1 / (n.v1 * n.v1);
    const double zeta = n.du1 / (n.u1 * n.u1) * T;
    const double denom = ap * (1.0 - b) + a * bp;
    const double expect = (ap * n.Dd - bp * (n.Dx - zeta)) / denom;
    double dm = 0.0;
    CHECK(invert_core_node(n, T, 0.0, dm) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(dm == doctest::Approx(std::abs(denom)));
}

TEST_CASE("degenerate denominator throws with a witness") {
    CoreNode n;
    n.u1 = -0.5; n.v1 = 0.5; n.du1 = 0.0; n.dv1 = 0.0;
    n.g1p = 1.0; n.Dx = 1.0; n.Dd = 1.0;
    double dm = 0.0;
    try {
        invert_core_node(n, 1.0, 3.25, dm);
        FAIL("expected DegenerateDenominator");
    } catch (const DegenerateDenominator& e) {
        CHECK(e.location == doctest::Approx(3.25));
        CHECK(e.magnitude < kEpsCond);
    }
}

TEST_CASE("variable-field round trip on the tanh family") {
    const FlatScene2D s = tanh_scene();
    const QuadOptions o = tight();
    auto fwd = [&](double x, double d) { return hwt_flat2d_reduced(s, x, d, o); };
    const Recon1D r = invert_2d_variable(s, fwd, linspace(-3.0, 3.0, 121), 1e-4,
                                         s.profile.integral(o));
    double worst = 0.0;
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        worst = std::max(worst, std::abs(r.values[i] - s.profile(r.grid[i])));
    CHECK(worst < 1e-5);
    CHECK(r.denom_min > kEpsCond);
    CHECK(r.method == "thm21");
}

TEST_CASE("grid-based round trip from swept data") {
    const FlatScene2D s = tanh_scene();
    const DataGrid data =
        sweep(s, linspace(-3.0, 3.0, 241), linspace(0.0, 5e-3, 3), 0, tight());
    const Recon1D r = invert_2d_variable(s, data, s.profile.integral(tight()));
    double worst = 0.0;
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        worst = std::max(worst, std::abs(r.values[i] - s.profile(r.grid[i])));
    CHECK(worst < 1e-3);
}

TEST_CASE("constant-field formulas agree with each other and the truth") {
    FlatScene2D s = tanh_scene();
    s.u1 = Expr::parse("-0.3", {"x"});
    s.v1 = Expr::parse("0.6", {"x"});
    const DataGrid data =
        sweep(s, linspace(-3.0, 3.0, 2401), linspace(0.0, 1e-3, 3), 0, tight());
    const Recon1D r1 = invert_2d_constant(data, -0.3, 0.6, 1);
    const Recon1D r2 = invert_2d_constant(data, -0.3, 0.6, 2);
    const Recon1D r3 = invert_2d_constant(data, -0.3, 0.6, 3);
    double pair = 0.0, truth = 0.0;
    for (std::size_t i = 0; i < r1.grid.size(); ++i) {
        pair = std::max(pair, std::abs(r1.values[i] - r2.values[i]));
        pair = std::max(pair, std::abs(r1.values[i] - r3.values[i]));
        const double f = s.profile(r1.grid[i]);
        truth = std::max({truth, std::abs(r1.values[i] - f),
                          std::abs(r2.values[i] - f), std::abs(r3.values[i] - f)});
    }
    CHECK(pair < 1e-5);
    CHECK(truth < 1e-4);
}

TEST_CASE("constant-field coefficient singularities are reported") {
    FlatScene2D s = tanh_scene();
    s.u1 = Expr::parse("-0.3", {"x"});
    s.v1 = Expr::parse("0.6", {"x"});
    const DataGrid data =
        sweep(s, linspace(-1.0, 1.0, 11), linspace(0.0, 1e-2, 3), 0, tight());
    CHECK_THROWS_AS(invert_2d_constant(data, -0.5, 0.5, 1), SingularCoefficient);
    CHECK_THROWS_AS(invert_2d_constant(data, -0.3, 1.0, 2), SingularCoefficient);
    CHECK_THROWS_AS(invert_2d_constant(data, -1.0, 0.6, 3), SingularCoefficient);
}

TEST_CASE("partial-data recursion ratio") {
    CHECK(partial_data_C(-0.3, 0.6) == doctest::Approx(3.5).epsilon(1e-14));
}

TEST_CASE("nullity check accepts zero and flags nonzero rows") {
    const auto xg = linspace(-3.0, 3.0, 61);
    std::vector<double> zero(xg.size(), 0.0), bump(xg.size(), 0.0);
    for (std::size_t i = 0; i < xg.size(); ++i)
        bump[i] = std::exp(-xg[i] * xg[i]);
    const NullityResult a =
        partial_data_nullity_check(xg, zero, -0.3, 0.6, 1.0, -6.0, 6.0);
    CHECK(a.consistent_with_zero);
    const NullityResult b =
        partial_data_nullity_check(xg, bump, -0.3, 0.6, 1.0, -6.0, 6.0);
    CHECK_FALSE(b.consistent_with_zero);
    CHECK(b.C == doctest::Approx(3.5));

    // a candidate satisfying the recursion on the window is consistent
    const double C = 3.5;
    auto cand = [C](double x) {
        return (x >= -6.0 && x <= 6.0) ? std::pow(C, x) : 0.0;
    };
    std::vector<double> row(xg.size());
    for (std::size_t i = 0; i < xg.size(); ++i) row[i] = cand(xg[i]);
    const NullityResult c = partial_data_nullity_check(xg, row, -0.3, 0.6, 1.0,
                                                      -10.0, 10.0, cand);
    CHECK(c.consistent_with_zero);
}

TEST_CASE("insufficient grids are rejected") {
    const FlatScene2D s = tanh_scene();
    DataGrid g;
    g.axis1 = linspace(-1.0, 1.0, 11);
    g.axis2 = {0.1, 0.2, 0.3};  // does not start at d = 0
    g.values = Eigen::MatrixXd::Zero(11, 3);
    CHECK_THROWS_AS(invert_2d_variable(s, g, 1.0), InsufficientGrid);
    g.axis2 = {0.0, 0.1};  // too few d rows for the forward difference
    g.values = Eigen::MatrixXd::Zero(11, 2);
    CHECK_THROWS_AS(invert_2d_variable(s, g, 1.0), InsufficientGrid);
}

TEST_CASE("fixed-theta line inversion round trip") {
    HyperplaneScene s;
    s.lambda_u = Expr::parse("-(0.6+0.2*tanh(x1+0.3*tanh(x2)))", {"x1", "x2"});
    s.lambda_v = Expr::parse("0.6-0.2*tanh(x1-0.3*tanh(x2))", {"x1", "x2"});
    s.theta0 = {1.0, 0.0};
    s.profile_nd = Expr::parse("exp(-x1^2-x2^2)", {"x1", "x2"});
    s.support_box = {-6.0, 6.0, -6.0, 6.0};
    s.recon_box = {-3.0, 3.0, -2.0, 2.0};
    const double off = 0.5;
    const QuadOptions o = tight();
    auto fwd = [&](const Vec2& xp, double d) { return hwt_fixed_theta(s, xp, d, o); };
    const Reduced1D line = fixed_theta_line(s, off);
    const double total = integrate(line.profile, line.sup_lo, line.sup_hi, o);
    const Recon2D r = invert_fixed_theta(s, fwd, linspace(-3.0, 3.0, 31), {off},
                                         1e-4, {{off, total}});
    double worst = 0.0;
    for (int i = 0; i < 31; ++i) {
        const double tau = -3.0 + 6.0 * i / 30.0;
        worst = std::max(worst,
                         std::abs(r.values(i, 0) - s.profile_nd(tau, off)));
    }
    CHECK(worst < 1e-4);

    CHECK_THROWS_AS(invert_fixed_theta(s, fwd, {0.0}, {off}, 1e-4, {{off + 1.0, total}}),
                    MissingLineIntegral);
}

TEST_CASE("x-ray limit recovers the line integral") {
    HyperplaneScene s;
    s.lambda_u = Expr::parse("-(0.5+0.1*tanh(0.05*x1))", {"x1", "x2"});
    s.lambda_v = Expr::parse("0.5+0.1*tanh(0.05*x1)", {"x1", "x2"});
    s.theta0 = {1.0, 0.0};
    s.profile_nd = Expr::parse("exp(-x1^2-x2^2)", {"x1", "x2"});
    s.support_box = {-3.0, 3.0, -3.0, 3.0};
    s.recon_box = {-2.0, 2.0, -2.0, 2.0};
    const QuadOptions o = tight();
    auto fwd = [&](const Vec2& xp, double d) { return hwt_fixed_theta(s, xp, d, o); };
    const XrayLimit lim = xray_limit(s, fwd, {0.0, 0.0},
                                     {-4.0, -5.0, -6.0, -7.0, -8.0, -9.0, -10.0});
    const double xray = integrate([&](double t) { return s.profile_nd(t, 0.0); },
                                  -3.0, 3.0, o);
    CHECK(lim.xray_estimate == doctest::Approx(xray).epsilon(1e-5));

    // constant lambda_v: the asymptotic coefficient vanishes identically
    HyperplaneScene z = s;
    z.lambda_v = Expr::parse("0.6+0*x1", {"x1", "x2"});
    auto fwdz = [&](const Vec2& xp, double d) { return hwt_fixed_theta(z, xp, d, o); };
    CHECK_THROWS_AS(xray_limit(z, fwdz, {0.0, 0.0}, {-4.0, -5.0, -6.0}), ZeroC);

    // probes inside the support never settle
    CHECK_THROWS_AS(xray_limit(s, fwd, {0.0, 0.0}, {-0.5, -1.0, -1.5, -2.0}), NoLimit);
}

TEST_CASE("analytic data derivatives match finite differences") {
    const FlatScene2D s = tanh_scene();
    const QuadOptions o = tight();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ux(-2.5, 2.5), ud(0.0, 3.0);
    const double h = 1e-5;
    for (int i = 0; i < 25; ++i) {
        const double x = ux(rng), d = ud(rng);
        const double fdx = (hwt_flat2d_reduced(s, x + h, d, o) -
                            hwt_flat2d_reduced(s, x - h, d, o)) / (2.0 * h);
        const double fdd = (hwt_flat2d_reduced(s, x, d + h, o) -
                            hwt_flat2d_reduced(s, x, d - h, o)) / (2.0 * h);
        CHECK(std::abs(d_dx_data_analytic(s, x, d, o) - fdx) < 1e-7);
        CHECK(std::abs(d_dd_data_analytic(s, x, d, o) - fdd) < 1e-7);
    }
}

TEST_CASE("curve round trip on the arc") {
    const CurveScene s = arc_scene();
    const CurveGeometry g(s);
    const QuadOptions o = tight();
    auto fwd = [&](double t0, double d) { return hwt_curve_reduced(s, g, t0, d, o); };
    const Recon1D r = invert_curve(s, g, fwd, linspace(-3.0, 3.0, 121), 1e-4,
                                   s.profile.integral(o));
    REQUIRE(r.resampled);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        worst = std::max(worst, std::abs(r.values[i] - s.profile(r.grid[i])));
    CHECK(worst < 5e-4);
    CHECK(r.method == "thm41");
}

TEST_CASE("non-monotone gliding coordinate disables resampling") {
    CurveScene s = arc_scene();
    // small circle traversed past the quarter turn: gamma1 = 2 sin(t/2)
    // peaks inside the window
    s.gamma_x = Expr::parse("2*sin(t/2)", {"t"});
    s.gamma_y = Expr::parse("2*(1-cos(t/2))", {"t"});
    s.t_min = 0.0;
    s.t_max = 6.0;
    s.angle_u = Expr::parse("2.2+0.05*tanh(t)", {"t"});
    s.angle_v = Expr::parse("0.9-0.05*tanh(t)", {"t"});
    s.recon_lo = 1.0;
    s.recon_hi = 5.0;
    const CurveGeometry g(s);
    const QuadOptions o = tight();
    auto fwd = [&](double t0, double d) { return hwt_curve_reduced(s, g, t0, d, o); };
    const Recon1D r = invert_curve(s, g, fwd, linspace(1.0, 5.0, 21), 1e-4,
                                   s.profile.integral(o));
    CHECK_FALSE(r.resampled);
    CHECK(r.raw_args.size() == r.raw_values.size());
    CHECK(r.raw_args.size() == 21);
}
