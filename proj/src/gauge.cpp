#include "headwave/gauge.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "headwave/errors.hpp"
#include "headwave/quadrature.hpp"

namespace headwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool clip_ray(const Vec2& p, const Vec2& dir, const SupportBox& b, double& s0,
              double& s1) {
    s0 = 0.0;
    s1 = kInf;
    auto slab = [&](double q, double d, double lo, double hi) {
        if (d == 0.0) return q >= lo && q <= hi;
        double a = (lo - q) / d, c = (hi - q) / d;
        if (a > c) std::swap(a, c);
        s0 = std::max(s0, a);
        s1 = std::min(s1, c);
        return true;
    };
    if (!slab(p.x(), dir.x(), b.x_lo, b.x_hi)) return false;
    if (!slab(p.y(), dir.y(), b.y_lo, b.y_hi)) return false;
    s0 = std::max(s0, 0.0);
    return s1 > s0;
}

// Ray integral of f from p in direction w(p), clipped to the box; the
// direction is frozen at p (exact along straight integral curves).
double ray_integral(const std::function<double(double, double)>& f, const Vec2& p,
                    const Vec2& dir, const SupportBox& box, const QuadOptions& opt) {
    double s0, s1;
    if (!clip_ray(p, dir, box, s0, s1)) return 0.0;
    return integrate([&](double s) { return f(p.x() + s * dir.x(), p.y() + s * dir.y()); },
                     s0, s1, opt);
}

void check_vanishes_on_line(const Expr& phi, double lo, double hi) {
    double worst = 0.0;
    for (int i = 0; i < 512; ++i) {
        const double x = lo + (hi - lo) * i / 511.0;
        worst = std::max(worst, std::abs(phi(x, 0.0)));
    }
    if (worst > 1e-10) throw BoundaryNonvanishing(worst);
}

} // namespace

std::string GaugeReport::to_text() const {
    std::ostringstream os;
    os << "max_forward_residual=" << max_forward_residual << "\n"
       << "closedness_residual=" << closedness_residual << "\n"
       << "pde_residual_uv=" << pde_residuals[0] << "\n"
       << "pde_residual_vu=" << pde_residuals[1] << "\n"
       << "boundary_residual=" << boundary_residual << "\n";
    return os.str();
}

FieldExt constant_field(const Vec2& w) {
    const std::vector<std::string> vars{"x", "y"};
    return {Expr::constant(w.x(), vars), Expr::constant(w.y(), vars)};
}

Expr directional(const Expr& phi, const Vec2& w) {
    return w.x() * phi.derivative(0) + w.y() * phi.derivative(1);
}

Expr directional3(const Expr& phi, const Vec3& w) {
    return w.x() * phi.derivative(0) + w.y() * phi.derivative(1) +
           w.z() * phi.derivative(2);
}

// --- constant-field kernel ---------------------------------------------

Expr gauge_forward_constant(const Expr& phi, const Vec2& u0, const Vec2& v0,
                            const SupportBox& box) {
    check_vanishes_on_line(phi, box.x_lo, box.x_hi);
    return directional(directional(phi, v0), u0);
}

PotentialPair potentials_from_null_constant(
    const std::function<double(double, double)>& f, const SupportBox& box,
    const Vec2& u0, const Vec2& v0, const QuadOptions& opt) {
    // spot-verify the nullity claim on a coarse forward grid
    {
        double scale = 0.0;
        for (int i = 0; i < 32; ++i)
            for (int j = 0; j < 32; ++j)
                scale = std::max(scale,
                                 std::abs(f(box.x_lo + (box.x_hi - box.x_lo) * i / 31.0,
                                            box.y_lo + (box.y_hi - box.y_lo) * j / 31.0)));
        auto u1 = [&](double) { return u0.x(); };
        auto v1 = [&](double) { return v0.x(); };
        const double reach = box.y_hi * 3.0 + 1.0;
        const double span = (box.x_hi - box.x_lo) + 2.0 * reach;
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 5; ++j) {
                const double x = box.x_lo - reach + span * i / 8.0;
                const double d = span * j / 4.0;
                const double r = hwt_field2d(f, box, u1, v1, x, d, opt);
                if (std::abs(r) > 1e-7 * (1.0 + scale)) throw NotNull(x, d, r);
            }
    }

    const double u1 = u0.x(), u2 = u0.y();
    const double v1 = v0.x(), v2 = v0.y();
    PotentialPair out;
    out.psi = [f, u1, u2, opt](double x, double y) {
        if (y <= 0.0) return 0.0;
        const double bx = x - (u1 / u2) * y;
        return integrate([&](double t) { return f(bx + t * u1, t * u2); }, 0.0, y / u2,
                         opt);
    };
    auto psi = out.psi;
    out.phi = [psi, v1, v2, opt](double x, double y) {
        if (y <= 0.0) return 0.0;
        const double bx = x - (v1 / v2) * y;
        return integrate([&](double t) { return psi(bx + t * v1, t * v2); }, 0.0,
                         y / v2, opt);
    };
    return out;
}

// --- general flat kernel ------------------------------------------------

GeneralGauge gauge_forward_general(const Expr& phi, const FieldExt& u,
                                   const FieldExt& v, const SupportBox& box) {
    constexpr int kLat = 64;
    auto lat = [&](int i, int n, double lo, double hi) {
        return lo + (hi - lo) * i / (n - 1.0);
    };

    // (B1): integral curves of the extensions are straight, i.e. (w.grad)w = 0
    for (const FieldExt* w : {&u, &v}) {
        const Expr ax = w->cx * w->cx.derivative(0) + w->cy * w->cx.derivative(1);
        const Expr ay = w->cx * w->cy.derivative(0) + w->cy * w->cy.derivative(1);
        double worst = 0.0;
        for (int i = 0; i < kLat; ++i)
            for (int j = 0; j < kLat; ++j) {
                const double x = lat(i, kLat, box.x_lo, box.x_hi);
                const double y = lat(j, kLat, box.y_lo, box.y_hi);
                worst = std::max(worst, std::hypot(ax(x, y), ay(x, y)));
            }
        if (worst > 1e-6) throw ExtensionNotStraight(worst);
    }

    // (B2): frame determinant bounded away from zero
    const Expr det = u.cx * v.cy - u.cy * v.cx;
    double det_min = kInf;
    for (int i = 0; i < kLat; ++i)
        for (int j = 0; j < kLat; ++j)
            det_min = std::min(det_min, std::abs(det(lat(i, kLat, box.x_lo, box.x_hi),
                                                     lat(j, kLat, box.y_lo, box.y_hi))));
    if (det_min < 1e-9) throw SingularFrame(det_min);

    check_vanishes_on_line(phi, box.x_lo, box.x_hi);

    auto nested = [&](const FieldExt& outer, const FieldExt& inner) {
        const Expr q =
            (inner.cx * phi.derivative(0) + inner.cy * phi.derivative(1)) / det;
        return outer.cx * q.derivative(0) + outer.cy * q.derivative(1);
    };
    GeneralGauge g{nested(u, v), nested(v, u), 0.0};
    for (int i = 0; i < kLat; ++i)
        for (int j = 0; j < kLat; ++j) {
            const double x = lat(i, kLat, box.x_lo, box.x_hi);
            const double y = lat(j, kLat, box.y_lo, box.y_hi);
            g.ordering_diff = std::max(g.ordering_diff, std::abs(g.f(x, y) - g.f_alt(x, y)));
        }
    return g;
}

double check_div_condition(const std::function<double(double, double)>& f,
                           const FieldExt& u, const FieldExt& v, const SupportBox& box,
                           int lattice, const QuadOptions& opt) {
    const Expr div_u = u.cx.derivative(0) + u.cy.derivative(1);
    const Expr div_v = v.cx.derivative(0) + v.cy.derivative(1);
    double worst = 0.0;
    for (int i = 0; i < lattice; ++i)
        for (int j = 0; j < lattice; ++j) {
            const double x = box.x_lo + (box.x_hi - box.x_lo) * i / (lattice - 1.0);
            const double y = box.y_lo + (box.y_hi - box.y_lo) * j / (lattice - 1.0);
            const double du = div_u(x, y), dv = div_v(x, y);
            double r = 0.0;
            if (du != 0.0) r += du * ray_integral(f, {x, y}, u(x, y), box, opt);
            if (dv != 0.0) r -= dv * ray_integral(f, {x, y}, v(x, y), box, opt);
            worst = std::max(worst, std::abs(r));
        }
    return worst;
}

NullPotential potential_from_null_general(
    const std::function<double(double, double)>& f, const FieldExt& u,
    const FieldExt& v, const SupportBox& box, bool curve_convention,
    const QuadOptions& opt) {
    if (!curve_convention && box.y_lo < 1e-6)
        throw SceneIllFormed("support must lie strictly above the gliding line");

    const double divres = check_div_condition(f, u, v, box, 48, opt);
    if (divres > 1e-7) throw DivConditionViolated(divres);

    // flat convention integrates with a minus sign; the curved one with a
    // plus sign and a flipped 1-form, which assembles to the same omega
    const double psi_sign = curve_convention ? 1.0 : -1.0;
    const double omega_sign = curve_convention ? -1.0 : 1.0;

    NullPotential np;
    np.psi_u = [f, u, box, opt, psi_sign](double x, double y) {
        return psi_sign * ray_integral(f, {x, y}, u(x, y), box, opt);
    };
    np.psi_v = [f, v, box, opt, psi_sign](double x, double y) {
        return psi_sign * ray_integral(f, {x, y}, v(x, y), box, opt);
    };
    auto psi_u = np.psi_u;
    auto psi_v = np.psi_v;
    np.omega_x = [psi_u, psi_v, u, v, omega_sign](double x, double y) {
        return omega_sign * (v(x, y).y() * psi_v(x, y) - u(x, y).y() * psi_u(x, y));
    };
    np.omega_y = [psi_u, psi_v, u, v, omega_sign](double x, double y) {
        return omega_sign * (u(x, y).x() * psi_u(x, y) - v(x, y).x() * psi_v(x, y));
    };

    // hull over which omega can be nonzero: points whose u- or v-ray meets
    // the support box
    const double reach = (box.y_hi + 1.0) * 3.0;
    const double hx_lo = box.x_lo - reach, hx_hi = box.x_hi + reach;
    const double hy_lo = std::min(0.0, box.y_lo), hy_hi = box.y_hi + 0.5;

    // closedness of omega by a central-difference curl on a lattice
    {
        const double h = 1e-3 * (box.x_hi - box.x_lo);
        double worst = 0.0;
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) {
                const double x = hx_lo + (hx_hi - hx_lo) * i / 15.0;
                const double y = hy_lo + (hy_hi - hy_lo) * j / 15.0;
                const double curl =
                    (np.omega_y(x + h, y) - np.omega_y(x - h, y)) / (2.0 * h) -
                    (np.omega_x(x, y + h) - np.omega_x(x, y - h)) / (2.0 * h);
                worst = std::max(worst, std::abs(curl));
            }
        np.report.closedness_residual = worst;
        if (worst > 1e-5) throw NotClosed(worst);
    }

    np.base = {hx_lo - 1.0, hy_lo};
    const Vec2 base = np.base;
    auto omega_x = np.omega_x;
    auto omega_y = np.omega_y;
    np.phi = [omega_x, omega_y, base, opt](double x, double y) {
        double val = integrate([&](double t) { return omega_x(t, base.y()); }, base.x(),
                               x, opt);
        if (x < base.x())
            val = -integrate([&](double t) { return omega_x(t, base.y()); }, x,
                             base.x(), opt);
        val += integrate([&](double t) { return omega_y(x, t); }, base.y(), y, opt);
        return val;
    };
    np.phi_alt = [omega_x, omega_y, base, opt](double x, double y) {
        double val = integrate([&](double t) { return omega_y(base.x(), t); }, base.y(),
                               y, opt);
        double horiz = integrate([&](double t) { return omega_x(t, y); },
                                 std::min(base.x(), x), std::max(base.x(), x), opt);
        val += (x >= base.x()) ? horiz : -horiz;
        return val;
    };

    for (int i = 0; i < 17; ++i) {
        const double x = hx_lo + (hx_hi - hx_lo) * i / 16.0;
        np.report.boundary_residual =
            std::max(np.report.boundary_residual, std::abs(np.phi(x, 0.0)));
    }

    // Both second-order identities, with grad phi = omega used exactly
    // (path independence of the potential) so only one finite-difference
    // level remains.
    {
        const Expr det = u.cx * v.cy - u.cy * v.cx;
        const double h = 1e-4 * (box.x_hi - box.x_lo);
        auto q_of = [&](const std::function<double(double, double)> ox,
                        const std::function<double(double, double)> oy,
                        const FieldExt& inner) {
            return [ox, oy, &inner, &det](double x, double y) {
                const Vec2 w = inner(x, y);
                return (w.x() * ox(x, y) + w.y() * oy(x, y)) / det(x, y);
            };
        };
        auto resid = [&](const FieldExt& outer, const FieldExt& inner) {
            auto q = q_of(omega_x, omega_y, inner);
            double worst = 0.0;
            for (int i = 0; i < 12; ++i)
                for (int j = 0; j < 12; ++j) {
                    const double x = box.x_lo + (box.x_hi - box.x_lo) * i / 11.0;
                    const double y = box.y_lo + (box.y_hi - box.y_lo) * j / 11.0;
                    const Vec2 w = outer(x, y);
                    const double qdx = (q(x + h, y) - q(x - h, y)) / (2.0 * h);
                    const double qdy = (q(x, y + h) - q(x, y - h)) / (2.0 * h);
                    worst = std::max(worst,
                                     std::abs(w.x() * qdx + w.y() * qdy - f(x, y)));
                }
            return worst;
        };
        np.report.pde_residuals = {resid(u, v), resid(v, u)};
    }
    return np;
}

// --- fixed-theta / depth constructions ---------------------------------

Expr depth_null_generator(const Expr& h) {
    const Expr dh = h.derivative(0);
    if (std::abs(h(0.0)) > 1e-12)
        throw HConditionViolated("h(0) = " + std::to_string(h(0.0)));
    if (std::abs(dh(0.0)) > 1e-12)
        throw HConditionViolated("h'(0) = " + std::to_string(dh(0.0)));
    return dh;
}

double depth_null_residual(const HyperplaneScene& s, const Expr& h,
                           const SupportBox& box2, double z_hi,
                           const std::vector<double>& tau_grid,
                           const std::vector<double>& d_grid, const QuadOptions& opt) {
    const Expr dh = depth_null_generator(h);
    auto g = [&dh](double, double, double z) { return dh(z); };
    double worst = 0.0;
    for (double tau : tau_grid)
        for (double d : d_grid) {
            const Vec2 xp = tau * s.theta0;
            worst = std::max(worst,
                             std::abs(hwt_fixed_theta_field(s, g, box2, z_hi, xp, d, opt)));
        }
    return worst;
}

Expr gauge_fixed_theta(const Expr& phi, const Vec3& u0, const Vec3& v0,
                       const SupportBox& box2) {
    double worst = 0.0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            const double x = box2.x_lo + (box2.x_hi - box2.x_lo) * i / 63.0;
            const double y = box2.y_lo + (box2.y_hi - box2.y_lo) * j / 63.0;
            worst = std::max(worst, std::abs(phi(x, y, 0.0)));
        }
    if (worst > 1e-10) throw BoundaryNonvanishing(worst);
    return directional3(directional3(phi, v0), u0);
}

} // namespace headwave
