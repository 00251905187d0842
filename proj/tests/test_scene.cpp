#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "headwave/scene.hpp"

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

} // namespace

TEST_CASE("tanh family passes validation") {
    const AssumptionReport rep = validate(tanh_scene());
    CHECK_MESSAGE(rep.ok(), rep.to_string());
}

TEST_CASE("sign violations are caught") {
    FlatScene2D s = tanh_scene();
    s.u1 = Expr::parse("0.5", {"x"});  // descent component must be negative
    CHECK_FALSE(validate(s).ok());

    FlatScene2D s2 = tanh_scene();
    s2.v1 = Expr::parse("1.4", {"x"});  // ascent component must be in (0,1)
    CHECK_FALSE(validate(s2).ok());
}

TEST_CASE("nondegeneracy is skipped for constant fields, enforced otherwise") {
    // constant coefficients route through the dedicated formulas, so the
    // variable-formula denominator is not checked for them
    FlatScene2D s = tanh_scene();
    s.u1 = Expr::parse("-0.3", {"x"});
    s.v1 = Expr::parse("0.6", {"x"});
    const AssumptionReport rep = validate(s);
    CHECK(rep.ok());
    bool saw_na = false;
    for (const auto& c : rep.checks)
        if (c.name.find("nondegeneracy") != std::string::npos)
            saw_na = c.verdict == AssumptionCheck::Verdict::NotApplicable;
    CHECK(saw_na);

    // variable coefficients keep the denominator check active
    FlatScene2D s2 = tanh_scene();
    const AssumptionReport rep2 = validate(s2);
    bool nd_checked = false;
    for (const auto& c : rep2.checks)
        if (c.name.find("nondegeneracy") != std::string::npos)
            nd_checked = c.verdict != AssumptionCheck::Verdict::NotApplicable;
    CHECK(nd_checked);
}

TEST_CASE("profile must vanish at the declared support edge") {
    FlatScene2D s = tanh_scene();
    s.profile.support_lo = -1.0;  // exp(-1) is far from zero
    s.profile.support_hi = 1.0;
    CHECK_FALSE(validate(s).ok());
}

TEST_CASE("lattice floor is enforced") {
    CHECK_THROWS_AS(validate(tanh_scene(), 17), LatticeTooCoarse);
}

TEST_CASE("arc geometry is unit speed with the expected gliding map") {
    const CurveScene s = arc_scene();
    const AssumptionReport rep = validate(s);
    CHECK_MESSAGE(rep.ok(), rep.to_string());
    const CurveGeometry g(s);
    CHECK(g.length() == doctest::Approx(16.0).epsilon(1e-10));
    for (double t : {-6.0, -1.3, 0.0, 2.7, 7.5}) {
        CHECK(g.tangent(t).norm() == doctest::Approx(1.0).epsilon(1e-9));
        // gamma1(t) = R sin(t/R) for a circle through the origin
        CHECK(g.gamma1(t) == doctest::Approx(20.0 * std::sin(t / 20.0)).epsilon(1e-9));
        CHECK(g.gamma1p(t) == doctest::Approx(std::cos(t / 20.0)).epsilon(1e-9));
        // frame vectors reproduce the angle fields
        CHECK(g.u_vec(t).dot(g.tangent(t)) == doctest::Approx(g.u1(t)).epsilon(1e-12));
        CHECK(g.v_vec(t).dot(g.tangent(t)) == doctest::Approx(g.v1(t)).epsilon(1e-12));
    }
}

TEST_CASE("arc length handles non-unit-speed parameterizations") {
    CurveScene s = arc_scene();
    s.gamma_x = Expr::parse("2*t", {"t"});
    s.gamma_y = Expr::parse("0*t", {"t"});
    s.t_min = 0.0;
    s.t_max = 3.0;
    const CurveGeometry g(s);
    CHECK(g.length() == doctest::Approx(6.0).epsilon(1e-10));
    // arc-length 5 along the doubled-speed line lands at x = 5
    CHECK(g.point(5.0).x() == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(g.cumulative_length(1.5) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("nearest point projection on a line and a circle") {
    CurveScene line = arc_scene();
    line.gamma_x = Expr::parse("t", {"t"});
    line.gamma_y = Expr::parse("0*t", {"t"});
    const CurveGeometry gl(line);
    const CurveFrame fr = nearest_point_frame(gl, {1.2, 0.7}, line.tube_radius);
    CHECK(fr.t_star == doctest::Approx(1.2).epsilon(1e-10));
    CHECK(fr.e.x() == doctest::Approx(1.0));
    CHECK(fr.e_perp.y() == doctest::Approx(1.0));

    const CurveScene arc = arc_scene();
    const CurveGeometry ga(arc);
    const Vec2 p = ga.point(3.0) + 0.8 * ga.normal(3.0);
    const CurveFrame fa = nearest_point_frame(ga, p, arc.tube_radius);
    CHECK(fa.t_star == doctest::Approx(3.0).epsilon(1e-8));
    // displacement is orthogonal to the tangent at the foot
    CHECK(std::abs((p - ga.point(fa.t_star)).dot(fa.e)) < 1e-9);

    CHECK_THROWS_AS(nearest_point_frame(ga, Vec2{0.0, 50.0}, arc.tube_radius),
                    OutsideTube);
}

TEST_CASE("warm-started projection agrees with the global search") {
    const CurveScene arc = arc_scene();
    const CurveGeometry ga(arc);
    for (double t : {-5.0, -0.4, 2.2, 6.0}) {
        const Vec2 p = ga.point(t) - 0.5 * ga.normal(t);
        const CurveFrame a = nearest_point_frame(ga, p, arc.tube_radius);
        const CurveFrame b = nearest_point_frame(ga, p, arc.tube_radius, t + 0.3);
        CHECK(a.t_star == doctest::Approx(b.t_star).epsilon(1e-9));
    }
}

TEST_CASE("self-intersecting curve is rejected") {
    CurveScene s = arc_scene();
    // figure-eight style loop passes near itself
    s.gamma_x = Expr::parse("sin(2*t)", {"t"});
    s.gamma_y = Expr::parse("sin(t)", {"t"});
    s.t_min = 0.0;
    s.t_max = 6.28318530717958647;
    s.tube_radius = 0.5;
    s.recon_lo = 0.1;
    s.recon_hi = 0.4;
    CHECK_FALSE(validate(s).ok());
}

TEST_CASE("report text names failing checks") {
    FlatScene2D s = tanh_scene();
    s.u1 = Expr::parse("0.5", {"x"});
    const AssumptionReport rep = validate(s);
    const std::string text = rep.to_string();
    CHECK(text.find("FAIL") != std::string::npos);
}
