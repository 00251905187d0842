#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "headwave/expr.hpp"
#include "headwave/interp.hpp"
#include "headwave/quadrature.hpp"

namespace headwave {

using Vec2 = Eigen::Vector2d;

/// One-variable compactly supported profile function with its declared
/// support interval and (optionally precomputed) total integral.
struct Profile {
    Expr expr;                             // one variable
    double support_lo = 0.0, support_hi = 0.0;
    std::optional<double> total_integral;

    double operator()(double x) const { return expr(x); }
    /// Supplied total integral, or quadrature over the declared support.
    double integral(const QuadOptions& opt = {}) const;
};

struct SupportBox {
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    bool contains(double x, double y) const {
        return x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi;
    }
};

/// Flat gliding line {y=0} in the plane, descent field u=(u1,u2) and
/// ascent field v=(v1,v2) given by their first components (u2, v2 are
/// the positive square roots). Either a profile f(x,y)=f~(x) or a
/// genuine 2D field.
struct FlatScene2D {
    Expr u1, v1;            // functions of x
    bool profile_mode = true;
    Profile profile;        // profile mode
    Expr field2d;           // field mode, variables (x, y)
    SupportBox field_box;   // field mode support
    double recon_lo = 0.0, recon_hi = 0.0;  // reconstruction domain

    double u2(double x) const { return std::sqrt(1.0 - u1(x) * u1(x)); }
    double v2(double x) const { return std::sqrt(1.0 - v1(x) * v1(x)); }
};

/// Gliding hyperplane {x_n = 0} in R^n with n = 3, gliding direction
/// theta0 fixed. Fields are u = (lambda_u theta0, u_n) with
/// u_n = sqrt(1 - lambda_u^2), same for v.
struct HyperplaneScene {
    int n = 3;
    Expr lambda_u, lambda_v;   // functions of (x1, x2) on the hyperplane
    Vec2 theta0{1.0, 0.0};
    Expr profile_nd;           // f~ on the hyperplane, variables (x1, x2)
    SupportBox support_box;    // support of f~ in hyperplane coordinates
    SupportBox recon_box;
};

/// Smooth gliding curve gamma in the plane. Ray fields along the curve
/// are given as signed angles from the unit tangent, so |u|=|v|=1 is
/// structural. The profile defines f via f(p) = f~(p . e(p)) with e the
/// nearest-point tangent frame inside the tube.
struct CurveScene {
    Expr gamma_x, gamma_y;     // components, function of original parameter t
    double t_min = 0.0, t_max = 0.0;
    Expr angle_u, angle_v;     // signed angle from tangent, function of the
                               // arc-length parameter (offset by t_min)
    Profile profile;
    double tube_radius = 1.0;
    double recon_lo = 0.0, recon_hi = 0.0;  // in the arc-length parameter
};

/// Arc-length view of a CurveScene: every query below takes the
/// arc-length parameter t in [t_min, t_min + length]. Built once,
/// immutable, cheap to copy by shared table.
class CurveGeometry {
public:
    explicit CurveGeometry(const CurveScene& scene);

    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }
    double length() const { return t_hi_ - t_lo_; }

    Vec2 point(double t) const;
    Vec2 tangent(double t) const;   // unit
    Vec2 normal(double t) const;    // tangent rotated +90 degrees
    Vec2 accel(double t) const;     // second derivative w.r.t. arc length

    double gamma1(double t) const { return point(t).dot(tangent(t)); }
    double gamma1p(double t) const { return 1.0 + point(t).dot(accel(t)); }

    double u1(double t) const { return std::cos(angle_u_(t)); }
    double v1(double t) const { return std::cos(angle_v_(t)); }
    double du1(double t) const { return -std::sin(angle_u_(t)) * dangle_u_(t); }
    double dv1(double t) const { return -std::sin(angle_v_(t)) * dangle_v_(t); }
    Vec2 u_vec(double t) const;
    Vec2 v_vec(double t) const;

    /// Cumulative arc length of the original parameterization measured
    /// from t_min (used by the reparameterization invariant check).
    double cumulative_length(double t_orig) const;

private:
    double orig_param(double t) const;  // arc length -> original parameter

    Expr gx_, gy_, dgx_, dgy_, ddgx_, ddgy_;
    Expr angle_u_, angle_v_, dangle_u_, dangle_v_;
    double t_lo_ = 0.0, t_hi_ = 0.0;
    double orig_min_ = 0.0;
    MonotoneCubic len_of_t_;   // original parameter -> cumulative length
    MonotoneCubic t_of_len_;   // cumulative length  -> original parameter
};

struct AssumptionCheck {
    enum class Verdict { Holds, Fails, NotApplicable };
    std::string name;
    Verdict verdict = Verdict::NotApplicable;
    double worst_margin = 0.0;          // most pessimistic margin seen
    std::vector<double> fail_points;    // lattice coordinates (first axis)
};

struct AssumptionReport {
    std::string scene_kind;
    std::vector<AssumptionCheck> checks;

    bool ok() const;
    std::string to_string() const;
};

inline constexpr double kEpsCond = 1e-8;    // nondegeneracy threshold
inline constexpr int kDefaultLattice = 512; // validation points per dimension

AssumptionReport validate(const FlatScene2D& s, int lattice = kDefaultLattice);
AssumptionReport validate(const HyperplaneScene& s, int lattice = kDefaultLattice);
AssumptionReport validate(const CurveScene& s, int lattice = kDefaultLattice);

struct CurveFrame {
    double t_star;  // arc-length parameter of the nearest curve point
    Vec2 e;         // unit tangent there
    Vec2 e_perp;    // +90 degree rotation
};

/// Nearest-point projection inside the tubular neighborhood of gamma.
CurveFrame nearest_point_frame(const CurveGeometry& geom, const Vec2& p,
                               double tube_radius);
CurveFrame nearest_point_frame(const CurveScene& scene, const Vec2& p);

/// Warm-started variant: Newton from `hint`, falling back to the global
/// search when the local iteration wanders. Used by leg quadratures where
/// consecutive query points are close.
CurveFrame nearest_point_frame(const CurveGeometry& geom, const Vec2& p,
                               double tube_radius, double hint);

} // namespace headwave
