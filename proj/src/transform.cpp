#include "headwave/transform.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "headwave/errors.hpp"

namespace headwave {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return g;
}

namespace {

// Parameter interval [s0, s1] where origin + s*dir lies inside the box.
bool clip_ray(double px, double py, double dx, double dy, const SupportBox& b,
              double& s0, double& s1) {
    s0 = 0.0;
    s1 = std::numeric_limits<double>::infinity();
    auto slab = [&](double p, double d, double lo, double hi) {
        if (d == 0.0) return p >= lo && p <= hi;
        double a = (lo - p) / d, c = (hi - p) / d;
        if (a > c) std::swap(a, c);
        s0 = std::max(s0, a);
        s1 = std::min(s1, c);
        return true;
    };
    if (!slab(px, dx, b.x_lo, b.x_hi)) return false;
    if (!slab(py, dy, b.y_lo, b.y_hi)) return false;
    s0 = std::max(s0, 0.0);
    return s1 > s0;
}

} // namespace

// --- DataGrid CSV ------------------------------------------------------

void DataGrid::write_csv(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
        char buf[96];
        std::snprintf(buf, sizeof buf, "# scene_hash=%llu\n",
                      static_cast<unsigned long long>(scene_hash));
        os << buf;
        std::snprintf(buf, sizeof buf, "# quad_tol=%.17g\n", quad_tol);
        os << buf;
        os << "x,d,value\n";
        for (std::size_t i = 0; i < axis1.size(); ++i)
            for (std::size_t j = 0; j < axis2.size(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", axis1[i],
                              axis2[j],
                              values(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(j)));
                os << buf;
            }
        if (!os) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

DataGrid DataGrid::read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    DataGrid g;
    std::string line;
    std::vector<double> xs, ds, vs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                const std::string key = line.substr(1, eq - 1);
                const std::string val = line.substr(eq + 1);
                if (key.find("scene_hash") != std::string::npos)
                    g.scene_hash = std::strtoull(val.c_str(), nullptr, 10);
                else if (key.find("quad_tol") != std::string::npos)
                    g.quad_tol = std::strtod(val.c_str(), nullptr);
            }
            continue;
        }
        if (line.rfind("x,d,", 0) == 0) continue;
        double x, d, v;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &d, &v) != 3)
            throw std::runtime_error("malformed CSV row: " + line);
        xs.push_back(x);
        ds.push_back(d);
        vs.push_back(v);
    }
    for (double d : ds) {
        bool seen = false;
        for (double e : g.axis2)
            if (e == d) {
                seen = true;
                break;
            }
        if (!seen)
            g.axis2.push_back(d);
        else
            break;  // axis2 repeats once the first row-major row ends
    }
    const std::size_t n2 = g.axis2.size();
    if (n2 == 0 || xs.size() % n2 != 0)
        throw std::runtime_error("CSV grid is not rectangular: " + path);
    const std::size_t n1 = xs.size() / n2;
    g.axis1.resize(n1);
    g.values.resize(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));
    for (std::size_t i = 0; i < n1; ++i) {
        g.axis1[i] = xs[i * n2];
        for (std::size_t j = 0; j < n2; ++j)
            g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                vs[i * n2 + j];
    }
    return g;
}

// --- reduced form ------------------------------------------------------

double reduced_forward(const Reduced1D& r, double x, double d, const QuadOptions& opt) {
    const double a = r.sup_lo, b = r.sup_hi;
    if (!(b > a)) return 0.0;
    auto g1 = [&](double t) { return r.gamma1 ? r.gamma1(t) : t; };

    double total = 0.0;
    const double gx = g1(x);
    if (gx > a)
        total += -(1.0 / r.u1(x)) * integrate(r.profile, a, std::min(gx, b), opt);
    if (d > 0.0)
        total += integrate([&](double s) { return r.profile(g1(x + s)); }, 0.0, d, opt);
    const double gxd = g1(x + d);
    if (gxd < b)
        total += (1.0 / r.v1(x + d)) * integrate(r.profile, std::max(gxd, a), b, opt);
    return total;
}

// --- flat 2D -----------------------------------------------------------

double hwt_flat2d_reduced(const FlatScene2D& s, double x, double d,
                          const QuadOptions& opt) {
    if (!s.profile_mode) throw SceneIllFormed("reduced form needs profile mode");
    Reduced1D r;
    r.u1 = [&](double t) { return s.u1(t); };
    r.v1 = [&](double t) { return s.v1(t); };
    r.profile = [&](double t) { return s.profile(t); };
    r.sup_lo = s.profile.support_lo;
    r.sup_hi = s.profile.support_hi;
    return reduced_forward(r, x, d, opt);
}

double hwt_field2d(const std::function<double(double, double)>& f,
                   const SupportBox& box, const Expr& u1e, const Expr& v1e,
                   double x, double d, const QuadOptions& opt) {
    return hwt_field2d(
        f, box, [&u1e](double t) { return u1e(t); },
        [&v1e](double t) { return v1e(t); }, x, d, opt);
}

double hwt_field2d(const std::function<double(double, double)>& f,
                   const SupportBox& box, const std::function<double(double)>& u1e,
                   const std::function<double(double)>& v1e, double x, double d,
                   const QuadOptions& opt) {
    double total = 0.0;

    const double u1 = u1e(x);
    const double u2 = std::sqrt(1.0 - u1 * u1);
    double s0, s1;
    if (clip_ray(x, 0.0, u1, u2, box, s0, s1))
        total += integrate([&](double s) { return f(x + s * u1, s * u2); }, s0, s1, opt);

    if (d > 0.0 && box.y_lo <= 0.0 && box.y_hi >= 0.0) {
        const double g0 = std::max(0.0, box.x_lo - x);
        const double g1 = std::min(d, box.x_hi - x);
        if (g1 > g0)
            total += integrate([&](double t) { return f(x + t, 0.0); }, g0, g1, opt);
    }

    const double v1 = v1e(x + d);
    const double v2 = std::sqrt(1.0 - v1 * v1);
    if (clip_ray(x + d, 0.0, v1, v2, box, s0, s1))
        total += integrate([&](double s) { return f(x + d + s * v1, s * v2); }, s0, s1, opt);
    return total;
}

double hwt_flat2d(const FlatScene2D& s, double x, double d, const QuadOptions& opt) {
    if (d < 0.0) throw SceneIllFormed("gliding parameter d must be >= 0");
    if (!s.profile_mode) {
        auto f = [&](double px, double py) { return s.field2d(px, py); };
        return hwt_field2d(f, s.field_box, s.u1, s.v1, x, d, opt);
    }

    const double a = s.profile.support_lo, b = s.profile.support_hi;
    auto prof = [&](double t) { return s.profile(t); };
    double total = 0.0;

    // descent leg, direction frozen at the starting point x
    const double u1 = s.u1(x);
    if (x > a) {
        const double t_lo = std::max(0.0, (x - b) / (-u1));
        const double t_hi = (x - a) / (-u1);
        total += integrate([&](double t) { return prof(x + t * u1); }, t_lo, t_hi, opt);
    }
    // glide
    {
        const double g0 = std::max(0.0, a - x);
        const double g1 = std::min(d, b - x);
        if (g1 > g0) total += integrate([&](double t) { return prof(x + t); }, g0, g1, opt);
    }
    // ascent leg from x + d
    const double v1 = s.v1(x + d);
    if (x + d < b) {
        const double t_lo = std::max(0.0, (a - x - d) / v1);
        const double t_hi = (b - x - d) / v1;
        total += integrate([&](double t) { return prof(x + d + t * v1); }, t_lo, t_hi, opt);
    }
    return total;
}

// --- fixed-theta hyperplane --------------------------------------------

Reduced1D fixed_theta_line(const HyperplaneScene& s, double off) {
    const Vec2 th = s.theta0;
    const Vec2 thp{-th.y(), th.x()};
    const Vec2 base = off * thp;

    Reduced1D r;
    r.u1 = [&s, base, th](double tau) {
        const Vec2 p = base + tau * th;
        return s.lambda_u(p.x(), p.y());
    };
    r.v1 = [&s, base, th](double tau) {
        const Vec2 p = base + tau * th;
        return s.lambda_v(p.x(), p.y());
    };
    r.profile = [&s, base, th](double tau) {
        const Vec2 p = base + tau * th;
        return s.profile_nd(p.x(), p.y());
    };

    // clip the full line against the support box: tau range where the line
    // point lies inside
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    auto slab = [&](double p, double dir, double b_lo, double b_hi) {
        if (dir == 0.0) return p >= b_lo && p <= b_hi;
        double a = (b_lo - p) / dir, c = (b_hi - p) / dir;
        if (a > c) std::swap(a, c);
        lo = std::max(lo, a);
        hi = std::min(hi, c);
        return true;
    };
    const bool inside = slab(base.x(), th.x(), s.support_box.x_lo, s.support_box.x_hi) &&
                        slab(base.y(), th.y(), s.support_box.y_lo, s.support_box.y_hi) &&
                        hi > lo;
    if (inside) {
        r.sup_lo = lo;
        r.sup_hi = hi;
    } else {
        r.sup_lo = r.sup_hi = 0.0;
    }
    return r;
}

double hwt_fixed_theta(const HyperplaneScene& s, const Vec2& xp, double d,
                       const QuadOptions& opt) {
    if (d < 0.0) throw SceneIllFormed("gliding parameter d must be >= 0");
    const Vec2 th = s.theta0;
    const Vec2 thp{-th.y(), th.x()};
    const Reduced1D line = fixed_theta_line(s, xp.dot(thp));
    return reduced_forward(line, xp.dot(th), d, opt);
}

double hwt_fixed_theta_field(const HyperplaneScene& s,
                             const std::function<double(double, double, double)>& f,
                             const SupportBox& box2, double z_hi, const Vec2& xp,
                             double d, const QuadOptions& opt) {
    const Vec2 th = s.theta0;
    double total = 0.0;

    auto leg = [&](const Vec2& foot, double lambda) {
        const double wn = std::sqrt(1.0 - lambda * lambda);
        // clip against box2 x [0, z_hi]
        double s0 = 0.0, s1 = z_hi / wn;
        const Vec2 dir = lambda * th;
        auto slab = [&](double p, double dd, double lo, double hi) {
            if (dd == 0.0) return p >= lo && p <= hi;
            double a = (lo - p) / dd, c = (hi - p) / dd;
            if (a > c) std::swap(a, c);
            s0 = std::max(s0, a);
            s1 = std::min(s1, c);
            return true;
        };
        if (!slab(foot.x(), dir.x(), box2.x_lo, box2.x_hi)) return;
        if (!slab(foot.y(), dir.y(), box2.y_lo, box2.y_hi)) return;
        if (s1 <= s0) return;
        total += integrate(
            [&](double t) {
                return f(foot.x() + t * dir.x(), foot.y() + t * dir.y(), t * wn);
            },
            s0, s1, opt);
    };

    leg(xp, s.lambda_u(xp.x(), xp.y()));
    if (d > 0.0)
        total += integrate(
            [&](double t) { return f(xp.x() + t * th.x(), xp.y() + t * th.y(), 0.0); },
            0.0, d, opt);
    leg(xp + d * th, s.lambda_v((xp + d * th).x(), (xp + d * th).y()));
    return total;
}

// --- gliding curve -----------------------------------------------------

Reduced1D curve_reduced_view(const CurveScene& s, const CurveGeometry& geom) {
    Reduced1D r;
    r.u1 = [&geom](double t) { return geom.u1(t); };
    r.v1 = [&geom](double t) { return geom.v1(t); };
    r.profile = [&s](double t) { return s.profile(t); };
    r.sup_lo = s.profile.support_lo;
    r.sup_hi = s.profile.support_hi;
    r.gamma1 = [&geom](double t) { return geom.gamma1(t); };
    return r;
}

double hwt_curve_reduced(const CurveScene& s, const CurveGeometry& geom, double t0,
                         double d, const QuadOptions& opt) {
    const Reduced1D r = curve_reduced_view(s, geom);
    return reduced_forward(r, t0, d, opt);
}

namespace {

// Arc-length parameter where the straight leg from `foot` in direction
// `dir` leaves the tube; also reports the projected profile argument at
// the exit so the caller can detect a truncated integrand.
double leg_tube_exit(const CurveGeometry& geom, double tube, const Vec2& foot,
                     const Vec2& dir, double hint, double& exit_arg) {
    const double step = tube / 16.0;
    double inside = 0.0;
    double t_hint = hint;
    double probe = step;
    for (int i = 0; i < 100000; ++i) {
        const Vec2 p = foot + probe * dir;
        try {
            const CurveFrame fr = nearest_point_frame(geom, p, tube, t_hint);
            t_hint = fr.t_star;
            inside = probe;
            probe += step;
        } catch (const OutsideTube&) {
            break;
        }
    }
    // bisect between the last inside point and the first outside point
    double lo = inside, hi = probe;
    for (int i = 0; i < 60 && hi - lo > 1e-12 * (1.0 + hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        try {
            const CurveFrame fr = nearest_point_frame(geom, foot + mid * dir, tube, t_hint);
            t_hint = fr.t_star;
            lo = mid;
        } catch (const OutsideTube&) {
            hi = mid;
        }
    }
    const CurveFrame fr = nearest_point_frame(geom, foot + lo * dir, tube, t_hint);
    exit_arg = (foot + lo * dir).dot(fr.e);
    return lo;
}

} // namespace

double hwt_curve(const CurveScene& s, const CurveGeometry& geom, double t0, double d,
                 const QuadOptions& opt) {
    if (t0 < geom.t_lo() || t0 + d > geom.t_hi())
        throw SceneIllFormed("glide segment leaves the curve's parameter range");

    double peak = 0.0;
    for (double t : linspace(s.profile.support_lo, s.profile.support_hi, 512))
        peak = std::max(peak, std::abs(s.profile(t)));

    auto leg = [&](double t_foot, const Vec2& dir) {
        const Vec2 foot = geom.point(t_foot);
        double exit_arg = 0.0;
        const double s_exit = leg_tube_exit(geom, s.tube_radius, foot, dir, t_foot, exit_arg);
        if (exit_arg > s.profile.support_lo && exit_arg < s.profile.support_hi &&
            std::abs(s.profile(exit_arg)) > 1e-9 * peak)
            throw LegExitsTube("profile argument " + std::to_string(exit_arg) +
                               " at tube exit");
        double hint = t_foot;
        auto integrand = [&geom, &s, &foot, &dir, &hint](double q) {
            const CurveFrame fr =
                nearest_point_frame(geom, foot + q * dir, s.tube_radius, hint);
            hint = fr.t_star;
            return s.profile((foot + q * dir).dot(fr.e));
        };
        return integrate(integrand, 0.0, s_exit * (1.0 - 1e-12), opt);
    };

    double total = leg(t0, geom.u_vec(t0));
    if (d > 0.0)
        total += integrate([&](double t) { return s.profile(geom.gamma1(t0 + t)); }, 0.0,
                           d, opt);
    total += leg(t0 + d, geom.v_vec(t0 + d));
    return total;
}

double hwt_curve_field(const CurveGeometry& geom,
                       const std::function<double(const Vec2&)>& f,
                       const SupportBox& box, double t0, double d,
                       const QuadOptions& opt) {
    double total = 0.0;
    auto leg = [&](double t_foot, const Vec2& dir) {
        const Vec2 foot = geom.point(t_foot);
        double s0, s1;
        if (!clip_ray(foot.x(), foot.y(), dir.x(), dir.y(), box, s0, s1)) return;
        total += integrate([&](double q) { return f(foot + q * dir); }, s0, s1, opt);
    };
    leg(t0, geom.u_vec(t0));
    if (d > 0.0)
        total += integrate([&](double t) { return f(geom.point(t0 + t)); }, 0.0, d, opt);
    leg(t0 + d, geom.v_vec(t0 + d));
    return total;
}

// --- sweeps ------------------------------------------------------------

DataGrid sweep(const std::function<double(double, double)>& fwd,
               std::vector<double> axis1, std::vector<double> axis2,
               std::uint64_t scene_hash, double quad_tol) {
    DataGrid g;
    g.axis1 = std::move(axis1);
    g.axis2 = std::move(axis2);
    g.scene_hash = scene_hash;
    g.quad_tol = quad_tol;
    const std::size_t n1 = g.axis1.size(), n2 = g.axis2.size();
    g.values.resize(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));

    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("HEADWAVE_THREADS")) {
        const long k = std::strtol(env, nullptr, 10);
        if (k > 0) workers = static_cast<unsigned>(k);
    }
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n1 * n2)));

    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::size_t err_node = static_cast<std::size_t>(-1);
    std::string err_msg;

    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n1 * n2) return;
            const std::size_t i = k / n2, j = k % n2;
            try {
                g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    fwd(g.axis1[i], g.axis2[j]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (k < err_node) {
                    err_node = k;
                    std::ostringstream os;
                    os << e.what() << " at node (x=" << g.axis1[i]
                       << ", d=" << g.axis2[j] << ")";
                    err_msg = os.str();
                }
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (err_node != static_cast<std::size_t>(-1))
        throw std::runtime_error(err_msg);
    return g;
}

DataGrid sweep(const FlatScene2D& s, std::vector<double> x_grid,
               std::vector<double> d_grid, std::uint64_t scene_hash,
               const QuadOptions& opt) {
    auto fwd = [&s, opt](double x, double d) {
        return s.profile_mode ? hwt_flat2d_reduced(s, x, d, opt)
                              : hwt_flat2d(s, x, d, opt);
    };
    return sweep(fwd, std::move(x_grid), std::move(d_grid), scene_hash, opt.abs_tol);
}

DataGrid sweep(const CurveScene& s, const CurveGeometry& geom,
               std::vector<double> t0_grid, std::vector<double> d_grid,
               std::uint64_t scene_hash, const QuadOptions& opt) {
    auto fwd = [&s, &geom, opt](double t0, double d) {
        return hwt_curve_reduced(s, geom, t0, d, opt);
    };
    return sweep(fwd, std::move(t0_grid), std::move(d_grid), scene_hash, opt.abs_tol);
}

} // namespace headwave
