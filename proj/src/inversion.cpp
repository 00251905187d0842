#include "headwave/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "headwave/errors.hpp"
#include "headwave/interp.hpp"

namespace headwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_d_rows(const DataGrid& g) {
    if (g.axis2.empty() || std::abs(g.axis2[0]) > 1e-12)
        throw InsufficientGrid("data grid has no d = 0 row");
    if (g.axis2.size() < 3)
        throw InsufficientGrid("need >= 3 d rows for the one-sided d-derivative");
    if (g.axis1.size() < 3)
        throw InsufficientGrid("need >= 3 axis1 samples for central differences");
}

// d/d(axis1) of the d=0 column; central interior, one-sided second order
// at the ends.
std::vector<double> grid_dx(const DataGrid& g) {
    const std::size_t n = g.axis1.size();
    const double h = g.axis1[1] - g.axis1[0];
    std::vector<double> out(n);
    auto v = [&](std::size_t i) { return g.values(static_cast<Eigen::Index>(i), 0); };
    out[0] = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (v(i + 1) - v(i - 1)) / (2.0 * h);
    out[n - 1] = (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) / (2.0 * h);
    return out;
}

// d/dd at d = 0 by the 3-point forward stencil (d < 0 has no data).
std::vector<double> grid_dd(const DataGrid& g) {
    const std::size_t n = g.axis1.size();
    const double h = g.axis2[1] - g.axis2[0];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        out[i] = (-3.0 * g.values(k, 0) + 4.0 * g.values(k, 1) - g.values(k, 2)) /
                 (2.0 * h);
    }
    return out;
}

} // namespace

void Recon1D::write_csv(const std::string& path,
                        const std::function<double(double)>& truth) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
        os << "# method=" << method << "\n";
        char buf[128];
        std::snprintf(buf, sizeof buf, "# denom_min=%.17g\n", denom_min);
        os << buf;
        os << (truth ? "x,f_recon,f_true,abs_err\n" : "x,f_recon\n");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (truth) {
                const double ft = truth(grid[i]);
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", grid[i],
                              values[i], ft, std::abs(values[i] - ft));
            } else {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid[i], values[i]);
            }
            os << buf;
        }
        if (!os) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

double invert_core_node(const CoreNode& n, double total_integral, double location,
                        double& denom_out) {
    const double a = 1.0 / n.u1 + 1.0 / n.v1;
    const double ap = -n.du1 / (n.u1 * n.u1) - n.dv1 / (n.v1 * n.v1);
    const double b = 1.0 / n.v1;
    const double bp = -n.dv1 / (n.v1 * n.v1);
    const double zeta = n.du1 / (n.u1 * n.u1) * total_integral;
    const double denom = ap * (1.0 - n.g1p * b) + n.g1p * a * bp;
    denom_out = std::abs(denom);
    if (denom_out < kEpsCond) throw DegenerateDenominator(location, denom_out);
    return (ap * n.Dd - bp * (n.Dx - zeta)) / denom;
}

// --- 2D flat -----------------------------------------------------------

Recon1D invert_2d_variable(const FlatScene2D& s, const DataGrid& data,
                           double total_integral) {
    require_d_rows(data);
    const Expr du1 = s.u1.derivative(0);
    const Expr dv1 = s.v1.derivative(0);
    const auto Dx = grid_dx(data);
    const auto Dd = grid_dd(data);

    Recon1D r;
    r.method = "thm21";
    r.grid = data.axis1;
    r.denom_min = kInf;
    r.values.resize(r.grid.size());
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        const double x = r.grid[i];
        CoreNode n{s.u1(x), s.v1(x), du1(x), dv1(x), 1.0, Dx[i], Dd[i]};
        double dmin;
        r.values[i] = invert_core_node(n, total_integral, x, dmin);
        r.denom_min = std::min(r.denom_min, dmin);
    }
    return r;
}

Recon1D invert_2d_variable(const FlatScene2D& s,
                           const std::function<double(double, double)>& fwd,
                           const std::vector<double>& x_grid, double fd_step,
                           double total_integral) {
    const Expr du1 = s.u1.derivative(0);
    const Expr dv1 = s.v1.derivative(0);
    const double h = fd_step;

    Recon1D r;
    r.method = "thm21";
    r.grid = x_grid;
    r.denom_min = kInf;
    r.values.resize(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double x = x_grid[i];
        const double Dx = (fwd(x + h, 0.0) - fwd(x - h, 0.0)) / (2.0 * h);
        const double Dd =
            (-3.0 * fwd(x, 0.0) + 4.0 * fwd(x, h) - fwd(x, 2.0 * h)) / (2.0 * h);
        CoreNode n{s.u1(x), s.v1(x), du1(x), dv1(x), 1.0, Dx, Dd};
        double dmin;
        r.values[i] = invert_core_node(n, total_integral, x, dmin);
        r.denom_min = std::min(r.denom_min, dmin);
    }
    return r;
}

Recon1D invert_2d_constant(const DataGrid& data, double u1, double v1, int formula) {
    if (formula < 1 || formula > 3)
        throw SingularCoefficient("formula must be 1, 2 or 3");
    if (formula == 1 && std::abs(u1 + v1) < 1e-12)
        throw SingularCoefficient("u1 + v1 = 0");
    if (formula == 2 && std::abs(v1 - 1.0) < 1e-12)
        throw SingularCoefficient("v1 = 1");
    if (formula == 3 && std::abs(u1 + 1.0) < 1e-12)
        throw SingularCoefficient("u1 = -1");

    if (data.axis1.size() < 3) throw InsufficientGrid("need >= 3 axis1 samples");
    if (data.axis2.empty() || std::abs(data.axis2[0]) > 1e-12)
        throw InsufficientGrid("data grid has no d = 0 row");
    if (formula != 1 && data.axis2.size() < 3)
        throw InsufficientGrid("need >= 3 d rows for the d-derivative");

    Recon1D r;
    r.method = "rmk22-" + std::to_string(formula);
    r.grid = data.axis1;
    r.values.resize(r.grid.size());
    const auto Dx = grid_dx(data);
    const std::vector<double> Dd = formula == 1 ? std::vector<double>() : grid_dd(data);

    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        switch (formula) {
            case 1:
                r.values[i] = -(u1 * v1 / (u1 + v1)) * Dx[i];
                r.denom_min = std::abs(u1 + v1);
                break;
            case 2:
                r.values[i] = v1 / (v1 - 1.0) * Dd[i];
                r.denom_min = std::abs(v1 - 1.0);
                break;
            default:
                r.values[i] = u1 / (1.0 + u1) * (Dd[i] - Dx[i]);
                r.denom_min = std::abs(1.0 + u1);
                break;
        }
    }
    return r;
}

double partial_data_C(double u1, double v1) {
    return (v1 / u1) * (u1 + 1.0) / (v1 - 1.0);
}

NullityResult partial_data_nullity_check(
    const std::vector<double>& x_grid, const std::vector<double>& row_d0, double u1,
    double v1, double d0, double sup_lo, double sup_hi,
    const std::function<double(double)>& candidate) {
    if (!(d0 > 0.0)) throw SceneIllFormed("partial-data check needs d0 > 0");
    NullityResult res;
    res.C = partial_data_C(u1, v1);

    if (candidate) {
        // recursion residual of the candidate profile, clamped to its support
        auto f = [&](double x) {
            return (x < sup_lo || x > sup_hi) ? 0.0 : candidate(x);
        };
        double peak = 0.0;
        for (double x : x_grid) peak = std::max(peak, std::abs(f(x)));
        for (double x : x_grid) {
            const double resid = std::abs(f(x + d0) - res.C * f(x));
            if (resid > res.max_residual) {
                res.max_residual = resid;
                res.violation_x = x;
            }
        }
        res.consistent_with_zero = res.max_residual <= 1e-9 * (1.0 + peak);
        return res;
    }

    double peak = 0.0;
    for (double v : row_d0) peak = std::max(peak, std::abs(v));
    if (peak <= 1e-10) {
        // a vanishing row plus compact support force f~ = 0 through the
        // recursion propagated from outside the support
        res.consistent_with_zero = true;
        return res;
    }
    for (std::size_t i = 0; i < row_d0.size(); ++i) {
        if (std::abs(row_d0[i]) > res.max_residual) {
            res.max_residual = std::abs(row_d0[i]);
            res.violation_x = x_grid[i];
        }
    }
    res.consistent_with_zero = false;
    return res;
}

// --- fixed-theta hyperplane --------------------------------------------

Recon2D invert_fixed_theta(const HyperplaneScene& s,
                           const std::function<double(const Vec2&, double)>& fwd,
                           const std::vector<double>& tau_grid,
                           const std::vector<double>& off_grid, double fd_step,
                           const std::map<double, double>& total_line_integrals) {
    const Vec2 th = s.theta0;
    const Vec2 thp{-th.y(), th.x()};
    const Expr lu1 = s.lambda_u.derivative(0), lu2 = s.lambda_u.derivative(1);
    const Expr lv1 = s.lambda_v.derivative(0), lv2 = s.lambda_v.derivative(1);
    const double h = fd_step;

    Recon2D r;
    r.axis_tau = tau_grid;
    r.axis_off = off_grid;
    r.denom_min = kInf;
    r.values.resize(static_cast<Eigen::Index>(tau_grid.size()),
                    static_cast<Eigen::Index>(off_grid.size()));

    for (std::size_t j = 0; j < off_grid.size(); ++j) {
        const double off = off_grid[j];
        double total = 0.0;
        bool found = false;
        for (const auto& [key, val] : total_line_integrals)
            if (std::abs(key - off) <= 1e-9) {
                total = val;
                found = true;
                break;
            }
        if (!found) throw MissingLineIntegral(off);

        const Vec2 base = off * thp;
        for (std::size_t i = 0; i < tau_grid.size(); ++i) {
            const double tau = tau_grid[i];
            const Vec2 p = base + tau * th;
            const double Dx =
                (fwd(base + (tau + h) * th, 0.0) - fwd(base + (tau - h) * th, 0.0)) /
                (2.0 * h);
            const double Dd =
                (-3.0 * fwd(p, 0.0) + 4.0 * fwd(p, h) - fwd(p, 2.0 * h)) / (2.0 * h);
            CoreNode n{s.lambda_u(p.x(), p.y()),
                       s.lambda_v(p.x(), p.y()),
                       th.x() * lu1(p.x(), p.y()) + th.y() * lu2(p.x(), p.y()),
                       th.x() * lv1(p.x(), p.y()) + th.y() * lv2(p.x(), p.y()),
                       1.0,
                       Dx,
                       Dd};
            double dmin;
            r.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                invert_core_node(n, total, tau, dmin);
            r.denom_min = std::min(r.denom_min, dmin);
        }
    }
    return r;
}

Recon1D invert_fixed_theta_line(const HyperplaneScene& s, const DataGrid& data,
                                double off, double total_line_integral) {
    require_d_rows(data);
    const Vec2 th = s.theta0;
    const Vec2 thp{-th.y(), th.x()};
    const Vec2 base = off * thp;
    const Expr lu1 = s.lambda_u.derivative(0), lu2 = s.lambda_u.derivative(1);
    const Expr lv1 = s.lambda_v.derivative(0), lv2 = s.lambda_v.derivative(1);
    const auto Dx = grid_dx(data);
    const auto Dd = grid_dd(data);

    Recon1D r;
    r.method = "thm31";
    r.grid = data.axis1;
    r.denom_min = kInf;
    r.values.resize(r.grid.size());
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        const Vec2 p = base + r.grid[i] * th;
        CoreNode n{s.lambda_u(p.x(), p.y()),
                   s.lambda_v(p.x(), p.y()),
                   th.x() * lu1(p.x(), p.y()) + th.y() * lu2(p.x(), p.y()),
                   th.x() * lv1(p.x(), p.y()) + th.y() * lv2(p.x(), p.y()),
                   1.0,
                   Dx[i],
                   Dd[i]};
        double dmin;
        r.values[i] = invert_core_node(n, total_line_integral, r.grid[i], dmin);
        r.denom_min = std::min(r.denom_min, dmin);
    }
    return r;
}

XrayLimit xray_limit(const HyperplaneScene& s,
                     const std::function<double(const Vec2&, double)>& fwd,
                     const Vec2& xp, std::vector<double> s_probe, double fd_step) {
    std::sort(s_probe.begin(), s_probe.end(), std::greater<>());  // toward -inf
    if (s_probe.size() < 2) throw NoLimit();

    const Vec2 th = s.theta0;
    const Expr lv1 = s.lambda_v.derivative(0), lv2 = s.lambda_v.derivative(1);
    auto dtheta_beta = [&](const Vec2& p) {
        // beta = 1 - 1/lambda_v, so D_theta beta = D_theta lambda_v / lambda_v^2
        const double lv = s.lambda_v(p.x(), p.y());
        const double dlv = th.x() * lv1(p.x(), p.y()) + th.y() * lv2(p.x(), p.y());
        return dlv / (lv * lv);
    };

    XrayLimit out;
    const double h = fd_step;
    double prev_est = kInf;
    bool converged = false;
    for (double sp : s_probe) {
        const Vec2 p = xp + sp * th;
        const double raw =
            (-3.0 * fwd(p, 0.0) + 4.0 * fwd(p, h) - fwd(p, 2.0 * h)) / (2.0 * h);
        out.raw_values.push_back(raw);
        const double C = dtheta_beta(p);
        if (std::abs(C) < 1e-12) throw ZeroC();
        const double est = raw / (-C);
        out.raw_limit = raw;
        out.C = C;
        out.xray_estimate = est;
        if (std::abs(est - prev_est) < 1e-8 * (1.0 + std::abs(est))) {
            converged = true;
            break;
        }
        prev_est = est;
    }
    if (!converged) throw NoLimit();
    return out;
}

// --- gliding curve -----------------------------------------------------

namespace {

Recon1D curve_finish(const std::vector<double>& t0_grid, std::vector<double> args,
                     std::vector<double> vals, double denom_min) {
    Recon1D r;
    r.method = "thm41";
    r.denom_min = denom_min;
    r.raw_args = args;
    r.raw_values = vals;

    bool inc = true, dec = true;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (!(args[i] > args[i - 1])) inc = false;
        if (!(args[i] < args[i - 1])) dec = false;
    }
    if (!inc && !dec) {
        r.resampled = false;  // gamma1 not monotone: keep raw pairs only
        r.grid = std::move(args);
        r.values = std::move(vals);
        return r;
    }
    if (dec) {
        std::reverse(args.begin(), args.end());
        std::reverse(vals.begin(), vals.end());
    }
    const MonotoneCubic interp = MonotoneCubic::fit(args, vals);
    r.grid = linspace(args.front(), args.back(), static_cast<int>(t0_grid.size()));
    r.values.resize(r.grid.size());
    for (std::size_t i = 0; i < r.grid.size(); ++i) r.values[i] = interp(r.grid[i]);
    r.resampled = true;
    return r;
}

} // namespace

Recon1D invert_curve(const CurveScene& s, const CurveGeometry& geom,
                     const DataGrid& data, double total_integral) {
    require_d_rows(data);
    const auto Dx = grid_dx(data);
    const auto Dd = grid_dd(data);
    std::vector<double> args(data.axis1.size()), vals(data.axis1.size());
    double denom_min = kInf;
    for (std::size_t i = 0; i < data.axis1.size(); ++i) {
        const double t0 = data.axis1[i];
        CoreNode n{geom.u1(t0),  geom.v1(t0), geom.du1(t0), geom.dv1(t0),
                   geom.gamma1p(t0), Dx[i],   Dd[i]};
        double dmin;
        vals[i] = invert_core_node(n, total_integral, t0, dmin);
        args[i] = geom.gamma1(t0);
        denom_min = std::min(denom_min, dmin);
    }
    return curve_finish(data.axis1, std::move(args), std::move(vals), denom_min);
}

Recon1D invert_curve(const CurveScene& s, const CurveGeometry& geom,
                     const std::function<double(double, double)>& fwd,
                     const std::vector<double>& t0_grid, double fd_step,
                     double total_integral) {
    (void)s;
    const double h = fd_step;
    std::vector<double> args(t0_grid.size()), vals(t0_grid.size());
    double denom_min = kInf;
    for (std::size_t i = 0; i < t0_grid.size(); ++i) {
        const double t0 = t0_grid[i];
        const double Dx = (fwd(t0 + h, 0.0) - fwd(t0 - h, 0.0)) / (2.0 * h);
        const double Dd =
            (-3.0 * fwd(t0, 0.0) + 4.0 * fwd(t0, h) - fwd(t0, 2.0 * h)) / (2.0 * h);
        CoreNode n{geom.u1(t0),  geom.v1(t0), geom.du1(t0), geom.dv1(t0),
                   geom.gamma1p(t0), Dx,      Dd};
        double dmin;
        vals[i] = invert_core_node(n, total_integral, t0, dmin);
        args[i] = geom.gamma1(t0);
        denom_min = std::min(denom_min, dmin);
    }
    return curve_finish(t0_grid, std::move(args), std::move(vals), denom_min);
}

// --- analytic data derivatives -----------------------------------------

namespace {

double cdf_left(const FlatScene2D& s, double x, const QuadOptions& opt) {
    const double a = s.profile.support_lo, b = s.profile.support_hi;
    if (x <= a) return 0.0;
    return integrate([&](double t) { return s.profile(t); }, a, std::min(x, b), opt);
}

double tail_right(const FlatScene2D& s, double x, const QuadOptions& opt) {
    const double a = s.profile.support_lo, b = s.profile.support_hi;
    if (x >= b) return 0.0;
    return integrate([&](double t) { return s.profile(t); }, std::max(x, a), b, opt);
}

} // namespace

double d_dx_data_analytic(const FlatScene2D& s, double x, double d,
                          const QuadOptions& opt) {
    if (!s.profile_mode) throw SceneIllFormed("analytic derivatives need profile mode");
    const Expr du1 = s.u1.derivative(0);
    const Expr dv1 = s.v1.derivative(0);
    const double u1 = s.u1(x), v1 = s.v1(x + d);
    const double f_x = s.profile.expr(x), f_xd = s.profile.expr(x + d);
    return du1(x) / (u1 * u1) * cdf_left(s, x, opt) - f_x / u1 + f_xd - f_x -
           dv1(x + d) / (v1 * v1) * tail_right(s, x + d, opt) - f_xd / v1;
}

double d_dd_data_analytic(const FlatScene2D& s, double x, double d,
                          const QuadOptions& opt) {
    if (!s.profile_mode) throw SceneIllFormed("analytic derivatives need profile mode");
    const Expr dv1 = s.v1.derivative(0);
    const double v1 = s.v1(x + d);
    const double f_xd = s.profile.expr(x + d);
    return f_xd - dv1(x + d) / (v1 * v1) * tail_right(s, x + d, opt) - f_xd / v1;
}

} // namespace headwave
