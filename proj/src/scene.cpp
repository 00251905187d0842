#include "headwave/scene.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "headwave/errors.hpp"

namespace headwave {

double Profile::integral(const QuadOptions& opt) const {
    if (total_integral) return *total_integral;
    return integrate([this](double x) { return expr(x); }, support_lo, support_hi, opt);
}

namespace {

std::vector<double> lattice_points(double lo, double hi, int n) {
    std::vector<double> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        pts[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return pts;
}

// Evaluates `margin` on the lattice; the condition "margin > 0 everywhere"
// becomes one AssumptionCheck.
template <class F>
AssumptionCheck check_positive(const std::string& name, const std::vector<double>& pts,
                               const F& margin) {
    AssumptionCheck c;
    c.name = name;
    c.verdict = AssumptionCheck::Verdict::Holds;
    c.worst_margin = std::numeric_limits<double>::infinity();
    for (double x : pts) {
        const double m = margin(x);
        if (m < c.worst_margin) c.worst_margin = m;
        if (m <= 0.0) {
            c.verdict = AssumptionCheck::Verdict::Fails;
            if (c.fail_points.size() < 16) c.fail_points.push_back(x);
        }
    }
    return c;
}

AssumptionCheck check_profile_support(const Profile& p) {
    AssumptionCheck c;
    c.name = "profile compact support at declared edges";
    c.verdict = AssumptionCheck::Verdict::Holds;
    double peak = 0.0;
    for (double x : lattice_points(p.support_lo, p.support_hi, 2048))
        peak = std::max(peak, std::abs(p(x)));
    const double edge = std::max(std::abs(p(p.support_lo)), std::abs(p(p.support_hi)));
    c.worst_margin = 1e-12 * peak - edge;
    if (peak > 0.0 && edge > 1e-12 * peak) {
        c.verdict = AssumptionCheck::Verdict::Fails;
        c.fail_points = {p.support_lo, p.support_hi};
    }
    return c;
}

} // namespace

bool AssumptionReport::ok() const {
    for (const auto& c : checks)
        if (c.verdict == AssumptionCheck::Verdict::Fails) return false;
    return true;
}

std::string AssumptionReport::to_string() const {
    std::ostringstream os;
    os << "scene: " << scene_kind << "\n";
    for (const auto& c : checks) {
        os << "  " << c.name << ": ";
        switch (c.verdict) {
            case AssumptionCheck::Verdict::Holds: os << "holds"; break;
            case AssumptionCheck::Verdict::Fails: os << "FAILS"; break;
            case AssumptionCheck::Verdict::NotApplicable: os << "n/a"; break;
        }
        if (c.verdict != AssumptionCheck::Verdict::NotApplicable)
            os << " (worst margin " << c.worst_margin << ")";
        for (std::size_t i = 0; i < c.fail_points.size(); ++i)
            os << (i ? ", " : " at ") << c.fail_points[i];
        os << "\n";
    }
    return os.str();
}

AssumptionReport validate(const FlatScene2D& s, int lattice) {
    if (lattice < 256) throw LatticeTooCoarse("need >= 256 points per dimension");
    AssumptionReport rep;
    rep.scene_kind = "flat2d";

    double lo, hi;
    if (s.profile_mode) {
        if (!(s.profile.support_hi > s.profile.support_lo))
            throw SceneIllFormed("profile support interval is empty");
        lo = std::min(s.profile.support_lo, s.recon_lo);
        hi = std::max(s.profile.support_hi, s.recon_hi);
    } else {
        if (!(s.field_box.x_hi > s.field_box.x_lo) || !(s.field_box.y_hi > s.field_box.y_lo))
            throw SceneIllFormed("field support box is empty");
        lo = s.field_box.x_lo;
        hi = s.field_box.x_hi;
    }
    const auto pts = lattice_points(lo, hi, lattice);

    rep.checks.push_back(check_positive("(A1) -1 < u1 < 0", pts, [&](double x) {
        const double u = s.u1(x);
        return std::min(-u, 1.0 + u);
    }));
    rep.checks.push_back(check_positive("(A1) 0 < v1 < 1", pts, [&](double x) {
        const double v = s.v1(x);
        return std::min(v, 1.0 - v);
    }));

    if (s.profile_mode) {
        const Expr du1 = s.u1.derivative(0);
        const Expr dv1 = s.v1.derivative(0);
        const bool constant_coeffs = du1.root()->kind == Expr::Kind::Num &&
                                     du1.root()->value == 0.0 &&
                                     dv1.root()->kind == Expr::Kind::Num &&
                                     dv1.root()->value == 0.0;
        if (constant_coeffs) {
            // constant coefficients are handled by the dedicated constant
            // formulas, which do not need this denominator
            AssumptionCheck na;
            na.name = "(A1) nondegeneracy on reconstruction domain";
            na.verdict = AssumptionCheck::Verdict::NotApplicable;
            rep.checks.push_back(na);
        } else {
            const auto rpts = lattice_points(s.recon_lo, s.recon_hi, lattice);
            rep.checks.push_back(check_positive(
                "(A1) nondegeneracy on reconstruction domain", rpts, [&](double x) {
                    const double u = s.u1(x), v = s.v1(x);
                    const double den = du1(x) * v * (1.0 - v) + dv1(x) * u * (1.0 - u);
                    return std::abs(den) - kEpsCond;
                }));
        }
        rep.checks.push_back(check_profile_support(s.profile));
    } else {
        AssumptionCheck na;
        na.name = "(A1) nondegeneracy on reconstruction domain";
        na.verdict = AssumptionCheck::Verdict::NotApplicable;
        rep.checks.push_back(na);
    }
    return rep;
}

AssumptionReport validate(const HyperplaneScene& s, int lattice) {
    if (lattice < 256) throw LatticeTooCoarse("need >= 256 points per dimension");
    if (s.n != 3) throw SceneIllFormed("only n = 3 hyperplane scenes are supported");
    if (!(s.support_box.x_hi > s.support_box.x_lo) ||
        !(s.support_box.y_hi > s.support_box.y_lo))
        throw SceneIllFormed("support box is empty");

    AssumptionReport rep;
    rep.scene_kind = "hyperplane";

    {
        AssumptionCheck c;
        c.name = "theta0 unit length";
        c.verdict = std::abs(s.theta0.norm() - 1.0) <= 1e-12
                        ? AssumptionCheck::Verdict::Holds
                        : AssumptionCheck::Verdict::Fails;
        c.worst_margin = 1e-12 - std::abs(s.theta0.norm() - 1.0);
        rep.checks.push_back(c);
    }

    // 2D lattice; failure points reported by their x1 coordinate.
    const double x_lo = std::min(s.support_box.x_lo, s.recon_box.x_lo);
    const double x_hi = std::max(s.support_box.x_hi, s.recon_box.x_hi);
    const double y_lo = std::min(s.support_box.y_lo, s.recon_box.y_lo);
    const double y_hi = std::max(s.support_box.y_hi, s.recon_box.y_hi);

    auto check_2d = [&](const std::string& name, auto margin, double a_lo, double a_hi,
                        double b_lo, double b_hi) {
        AssumptionCheck c;
        c.name = name;
        c.verdict = AssumptionCheck::Verdict::Holds;
        c.worst_margin = std::numeric_limits<double>::infinity();
        for (double x : lattice_points(a_lo, a_hi, lattice))
            for (double y : lattice_points(b_lo, b_hi, lattice)) {
                const double m = margin(x, y);
                if (m < c.worst_margin) c.worst_margin = m;
                if (m <= 0.0) {
                    c.verdict = AssumptionCheck::Verdict::Fails;
                    if (c.fail_points.size() < 16) c.fail_points.push_back(x);
                }
            }
        rep.checks.push_back(c);
    };

    check_2d("(A2) lambda_u < 0 and |lambda_u| < 1",
             [&](double x, double y) {
                 const double l = s.lambda_u(x, y);
                 return std::min(-l, 1.0 + l);
             },
             x_lo, x_hi, y_lo, y_hi);
    check_2d("(A2) 0 < lambda_v < 1",
             [&](double x, double y) {
                 const double l = s.lambda_v(x, y);
                 return std::min(l, 1.0 - l);
             },
             x_lo, x_hi, y_lo, y_hi);

    const Expr lu1 = s.lambda_u.derivative(0), lu2 = s.lambda_u.derivative(1);
    const Expr lv1 = s.lambda_v.derivative(0), lv2 = s.lambda_v.derivative(1);
    check_2d("(A2) nondegeneracy on reconstruction domain",
             [&](double x, double y) {
                 const double lu = s.lambda_u(x, y), lv = s.lambda_v(x, y);
                 const double dlu = s.theta0.x() * lu1(x, y) + s.theta0.y() * lu2(x, y);
                 const double dlv = s.theta0.x() * lv1(x, y) + s.theta0.y() * lv2(x, y);
                 const double den = (1.0 - lv) * lv * dlu + (1.0 - lu) * lu * dlv;
                 return std::abs(den) - kEpsCond;
             },
             s.recon_box.x_lo, s.recon_box.x_hi, s.recon_box.y_lo, s.recon_box.y_hi);
    return rep;
}

// --- CurveGeometry -----------------------------------------------------

CurveGeometry::CurveGeometry(const CurveScene& scene)
    : gx_(scene.gamma_x), gy_(scene.gamma_y),
      dgx_(scene.gamma_x.derivative(0)), dgy_(scene.gamma_y.derivative(0)),
      ddgx_(dgx_.derivative(0)), ddgy_(dgy_.derivative(0)),
      angle_u_(scene.angle_u), angle_v_(scene.angle_v),
      dangle_u_(scene.angle_u.derivative(0)), dangle_v_(scene.angle_v.derivative(0)),
      orig_min_(scene.t_min) {
    if (!(scene.t_max > scene.t_min)) throw SceneIllFormed("curve t range is empty");
    if (!(scene.tube_radius > 0.0)) throw SceneIllFormed("tube radius must be positive");

    // Cumulative arc length by composite Simpson on 4096 panels.
    constexpr int kPanels = 4096;
    const double h = (scene.t_max - scene.t_min) / kPanels;
    auto speed = [&](double t) {
        const double a = dgx_(t), b = dgy_(t);
        return std::hypot(a, b);
    };
    std::vector<double> ts(kPanels + 1), len(kPanels + 1);
    ts[0] = scene.t_min;
    len[0] = 0.0;
    double prev = speed(scene.t_min);
    for (int i = 0; i < kPanels; ++i) {
        const double t0 = scene.t_min + i * h;
        const double mid = speed(t0 + 0.5 * h);
        const double next = speed(t0 + h);
        if (prev <= 0.0 || mid <= 0.0)
            throw SceneIllFormed("curve parameterization is singular (|gamma'| = 0)");
        ts[static_cast<std::size_t>(i) + 1] = t0 + h;
        len[static_cast<std::size_t>(i) + 1] =
            len[static_cast<std::size_t>(i)] + h / 6.0 * (prev + 4.0 * mid + next);
        prev = next;
    }
    t_lo_ = scene.t_min;
    t_hi_ = scene.t_min + len.back();
    len_of_t_ = MonotoneCubic::fit(ts, len);
    t_of_len_ = MonotoneCubic::fit(std::move(len), std::move(ts));
}

double CurveGeometry::orig_param(double t) const { return t_of_len_(t - t_lo_); }

double CurveGeometry::cumulative_length(double t_orig) const {
    return len_of_t_(t_orig);
}

Vec2 CurveGeometry::point(double t) const {
    const double s = orig_param(t);
    return {gx_(s), gy_(s)};
}

Vec2 CurveGeometry::tangent(double t) const {
    const double s = orig_param(t);
    Vec2 d{dgx_(s), dgy_(s)};
    return d / d.norm();
}

Vec2 CurveGeometry::normal(double t) const {
    const Vec2 e = tangent(t);
    return {-e.y(), e.x()};
}

Vec2 CurveGeometry::accel(double t) const {
    const double s = orig_param(t);
    const Vec2 d{dgx_(s), dgy_(s)};
    const Vec2 dd{ddgx_(s), ddgy_(s)};
    const double n2 = d.squaredNorm();
    // curvature vector: second derivative with respect to arc length
    return dd / n2 - d * (d.dot(dd)) / (n2 * n2);
}

Vec2 CurveGeometry::u_vec(double t) const {
    const double a = angle_u_(t);
    return std::cos(a) * tangent(t) + std::sin(a) * normal(t);
}

Vec2 CurveGeometry::v_vec(double t) const {
    const double a = angle_v_(t);
    return std::cos(a) * tangent(t) + std::sin(a) * normal(t);
}

AssumptionReport validate(const CurveScene& s, int lattice) {
    if (lattice < 256) throw LatticeTooCoarse("need >= 256 points per dimension");
    CurveGeometry geom(s);
    AssumptionReport rep;
    rep.scene_kind = "curve";

    const auto pts = lattice_points(geom.t_lo(), geom.t_hi(), lattice);

    rep.checks.push_back(check_positive(
        "unit speed after arc-length reparameterization", pts, [&](double t) {
            const double h = 1e-4;
            const double a = std::max(geom.t_lo(), t - h);
            const double b = std::min(geom.t_hi(), t + h);
            const double sp = (geom.point(b) - geom.point(a)).norm() / (b - a);
            return 1e-9 - std::abs(sp - 1.0);
        }));

    rep.checks.push_back(check_positive("(A3) sign conditions on u, v", pts, [&](double t) {
        const Vec2 e = geom.tangent(t), n = geom.normal(t);
        const Vec2 u = geom.u_vec(t), v = geom.v_vec(t);
        return std::min(std::min(-u.dot(e), u.dot(n)), std::min(v.dot(e), v.dot(n)));
    }));

    const auto rpts = lattice_points(s.recon_lo, s.recon_hi, lattice);
    rep.checks.push_back(check_positive(
        "(A3) nondegeneracy on reconstruction domain", rpts, [&](double t) {
            const double u1 = geom.u1(t), v1 = geom.v1(t);
            const double du1 = geom.du1(t), dv1 = geom.dv1(t);
            const double a = 1.0 / u1 + 1.0 / v1;
            const double ap = -du1 / (u1 * u1) - dv1 / (v1 * v1);
            const double b = 1.0 / v1;
            const double bp = -dv1 / (v1 * v1);
            const double g1p = geom.gamma1p(t);
            return std::abs(ap * (1.0 - g1p * b) + g1p * a * bp) - kEpsCond;
        }));

    {
        AssumptionCheck c;
        c.name = "no self-intersection within tube separation";
        c.verdict = AssumptionCheck::Verdict::Holds;
        c.worst_margin = std::numeric_limits<double>::infinity();
        const auto sp = lattice_points(geom.t_lo(), geom.t_hi(), 256);
        std::vector<Vec2> gp;
        gp.reserve(sp.size());
        for (double t : sp) gp.push_back(geom.point(t));
        for (std::size_t i = 0; i < sp.size(); ++i)
            for (std::size_t j = i + 1; j < sp.size(); ++j) {
                if (sp[j] - sp[i] < 2.0 * s.tube_radius) continue;
                const double m = (gp[i] - gp[j]).norm() - 0.5 * s.tube_radius;
                if (m < c.worst_margin) c.worst_margin = m;
                if (m <= 0.0) {
                    c.verdict = AssumptionCheck::Verdict::Fails;
                    if (c.fail_points.size() < 16) c.fail_points.push_back(sp[i]);
                }
            }
        rep.checks.push_back(c);
    }

    rep.checks.push_back(check_profile_support(s.profile));
    return rep;
}

CurveFrame nearest_point_frame(const CurveGeometry& geom, const Vec2& p,
                               double tube_radius) {
    // Seed from a dense parameter scan, then Newton on the stationarity
    // condition (p - gamma(t)) . gamma'(t) = 0.
    constexpr int kSeeds = 1024;
    double best_t = geom.t_lo(), best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kSeeds; ++i) {
        const double t = geom.t_lo() + geom.length() * i / (kSeeds - 1);
        const double d = (p - geom.point(t)).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }

    auto stationarity = [&](double t) { return (p - geom.point(t)).dot(geom.tangent(t)); };

    double t = best_t;
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
        const double f = stationarity(t);
        if (std::abs(f) <= 1e-12) {
            converged = true;
            break;
        }
        const double fp = -1.0 + (p - geom.point(t)).dot(geom.accel(t));
        if (fp == 0.0) break;
        double tn = t - f / fp;
        tn = std::clamp(tn, geom.t_lo(), geom.t_hi());
        if (tn == t) break;
        t = tn;
    }
    const bool at_edge = t <= geom.t_lo() || t >= geom.t_hi();
    if (!converged && !at_edge) {
        // golden-section fallback on the squared distance
        const double step = geom.length() / (kSeeds - 1);
        double a = std::max(geom.t_lo(), best_t - step);
        double b = std::min(geom.t_hi(), best_t + step);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 200 && b - a > 1e-14 * geom.length(); ++it) {
            const double c1 = b - gr * (b - a);
            const double c2 = a + gr * (b - a);
            if ((p - geom.point(c1)).squaredNorm() < (p - geom.point(c2)).squaredNorm())
                b = c2;
            else
                a = c1;
        }
        t = 0.5 * (a + b);
        if (std::abs(stationarity(t)) > 1e-9 && t > geom.t_lo() && t < geom.t_hi())
            throw NewtonDivergence();
    }

    if ((p - geom.point(t)).norm() >= tube_radius) throw OutsideTube();
    CurveFrame fr;
    fr.t_star = t;
    fr.e = geom.tangent(t);
    fr.e_perp = {-fr.e.y(), fr.e.x()};
    return fr;
}

CurveFrame nearest_point_frame(const CurveScene& scene, const Vec2& p) {
    CurveGeometry geom(scene);
    return nearest_point_frame(geom, p, scene.tube_radius);
}

CurveFrame nearest_point_frame(const CurveGeometry& geom, const Vec2& p,
                               double tube_radius, double hint) {
    double t = std::clamp(hint, geom.t_lo(), geom.t_hi());
    bool ok = false;
    for (int it = 0; it < 30; ++it) {
        const double f = (p - geom.point(t)).dot(geom.tangent(t));
        if (std::abs(f) <= 1e-12) {
            ok = true;
            break;
        }
        const double fp = -1.0 + (p - geom.point(t)).dot(geom.accel(t));
        if (fp == 0.0) break;
        const double tn = std::clamp(t - f / fp, geom.t_lo(), geom.t_hi());
        if (tn == t) {
            ok = true;  // pinned at an endpoint
            break;
        }
        t = tn;
    }
    if (ok && std::abs(t - hint) <= 0.25 * geom.length() + 1e-12) {
        if ((p - geom.point(t)).norm() >= tube_radius) throw OutsideTube();
        CurveFrame fr;
        fr.t_star = t;
        fr.e = geom.tangent(t);
        fr.e_perp = {-fr.e.y(), fr.e.x()};
        return fr;
    }
    return nearest_point_frame(geom, p, tube_radius);
}

} // namespace headwave
