#include "headwave/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>

#include "headwave/config.hpp"
#include "headwave/errors.hpp"
#include "headwave/gauge.hpp"
#include "headwave/inversion.hpp"
#include "headwave/transform.hpp"

namespace headwave {

namespace {

enum ExitCode {
    kOk = 0,
    kVerifyFail = 1,
    kConfigError = 2,
    kSceneFail = 3,
    kNumericalError = 4,
    kHashMismatch = 5,
    kDegenerate = 6,
    kGaugeFail = 7,
};

// Shared exception-to-exit-code policy around every command body.
template <class Body>
int guarded(const Body& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kConfigError;
    } catch (const SceneIllFormed& e) {
        std::cerr << e.what() << "\n";
        return kConfigError;
    } catch (const LatticeTooCoarse& e) {
        std::cerr << e.what() << "\n";
        return kConfigError;
    } catch (const SceneInvalid& e) {
        std::cerr << e.what() << "\n";
        return kSceneFail;
    } catch (const DegenerateDenominator& e) {
        std::cerr << e.what() << " at x=" << e.location << " (|denom|=" << e.magnitude
                  << ")\n";
        return kDegenerate;
    } catch (const SingularCoefficient& e) {
        std::cerr << e.what() << "\n";
        return kDegenerate;
    } catch (const InsufficientGrid& e) {
        std::cerr << e.what() << "\n";
        return kConfigError;
    } catch (const MissingLineIntegral& e) {
        std::cerr << e.what() << " " << e.offset << "\n";
        return kConfigError;
    } catch (const BoundaryNonvanishing& e) {
        std::cerr << e.what() << " (residual " << e.residual << ")\n";
        return kGaugeFail;
    } catch (const NotNull& e) {
        std::cerr << e.what() << " at (x=" << e.witness_x << ", d=" << e.witness_d
                  << "), value " << e.value << "\n";
        return kGaugeFail;
    } catch (const NotClosed& e) {
        std::cerr << e.what() << "\n";
        return kGaugeFail;
    } catch (const DivConditionViolated& e) {
        std::cerr << e.what() << "\n";
        return kGaugeFail;
    } catch (const HConditionViolated& e) {
        std::cerr << e.what() << "\n";
        return kGaugeFail;
    } catch (const ExtensionNotStraight& e) {
        std::cerr << e.what() << "\n";
        return kGaugeFail;
    } catch (const SingularFrame& e) {
        std::cerr << e.what() << "\n";
        return kGaugeFail;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kNumericalError;
    }
}

void require_assumptions(const AssumptionReport& rep) {
    if (!rep.ok()) {
        std::cerr << rep.to_string();
        throw SceneInvalid("see assumption report");
    }
}

std::string out_path(const RunConfig& cfg, const CliArgs& args,
                     const std::string& fallback) {
    if (!args.out_path.empty()) return args.out_path;
    return cfg.get_or("output", "csv", fallback);
}

void print_grid_summary(const DataGrid& g) {
    std::printf("nodes: %zu x %zu\n", g.axis1.size(), g.axis2.size());
    std::printf("min value: %.17g\n", g.values.minCoeff());
    std::printf("max value: %.17g\n", g.values.maxCoeff());
}

double constant_of(const Expr& e, const std::string& what) {
    // a field is "constant" when its symbolic derivative folds to zero and
    // evaluation agrees at two probe points
    const double a = e(0.0), b = e(0.7);
    if (std::abs(a - b) > 1e-14)
        throw ConfigError(what, "expression must be constant for this method");
    return a;
}

double total_for(const CliArgs& args, const Profile& p, const QuadOptions& opt) {
    if (args.total_integral) return *args.total_integral;
    return p.integral(opt);
}

void report_errors(const Recon1D& r, const std::function<double(double)>& truth) {
    double mx = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        const double e = std::abs(r.values[i] - truth(r.grid[i]));
        mx = std::max(mx, e);
        mean += e;
    }
    mean /= static_cast<double>(r.grid.size());
    std::printf("max abs error: %.6g\n", mx);
    std::printf("mean abs error: %.6g\n", mean);
}

} // namespace

// --- forward ------------------------------------------------------------

int cmd_forward(const CliArgs& args) {
    return guarded([&]() -> int {
        const RunConfig cfg = load_config(args.config_path);
        const QuadOptions opt = quad_options(cfg);
        const std::string kind = scene_kind(cfg);
        const GridSpec grid = build_grid(cfg, false);
        const std::uint64_t hash = scene_fingerprint(cfg);
        DataGrid g;

        if (kind == "flat2d") {
            const FlatScene2D s = build_flat_scene(cfg);
            require_assumptions(validate(s));
            g = sweep(s, grid.axis1, grid.axis2, hash, opt);
        } else if (kind == "hyperplane") {
            const HyperplaneScene s = build_hyperplane_scene(cfg);
            require_assumptions(validate(s, 256));
            const double off = cfg.get_num_or("scene", "offset", 0.0);
            const Vec2 thp{-s.theta0.y(), s.theta0.x()};
            auto fwd = [&](double tau, double d) {
                return hwt_fixed_theta(s, off * thp + tau * s.theta0, d, opt);
            };
            g = sweep(fwd, grid.axis1, grid.axis2, hash, opt.abs_tol);
        } else if (kind == "curve") {
            const CurveScene s = build_curve_scene(cfg);
            require_assumptions(validate(s));
            const CurveGeometry geom(s);
            g = sweep(s, geom, grid.axis1, grid.axis2, hash, opt);
        } else {
            throw ConfigError("scene.kind", "unknown kind: " + kind);
        }

        g.write_csv(out_path(cfg, args, "forward.csv"));
        print_grid_summary(g);
        return kOk;
    });
}

// --- invert -------------------------------------------------------------

int cmd_invert(const CliArgs& args) {
    return guarded([&]() -> int {
        const RunConfig cfg = load_config(args.config_path);
        if (args.data_path.empty())
            throw ConfigError("--data", "invert needs a data CSV");
        const QuadOptions opt = quad_options(cfg);
        const DataGrid data = DataGrid::read_csv(args.data_path);
        const std::uint64_t hash = scene_fingerprint(cfg);
        if (data.scene_hash != hash) {
            if (!args.override_hash) {
                std::cerr << "scene hash mismatch: data " << data.scene_hash
                          << " vs config " << hash << "\n";
                return kHashMismatch;
            }
            std::cerr << "WARNING: scene hash mismatch overridden (" << data.scene_hash
                      << " vs " << hash << ")\n";
        }

        const std::string kind = scene_kind(cfg);
        const std::string path = out_path(cfg, args, "recon.csv");

        if (kind == "flat2d") {
            const FlatScene2D s = build_flat_scene(cfg);
            if (!s.profile_mode)
                throw ConfigError("scene.mode", "inversion needs profile mode");
            auto truth = [&s](double x) { return s.profile(x); };
            const std::string method = cfg.sections.count("task")
                                           ? cfg.get_or("task", "method", "thm21")
                                           : "thm21";
            if (method == "thm21") {
                require_assumptions(validate(s));
                const Recon1D r =
                    invert_2d_variable(s, data, total_for(args, s.profile, opt));
                r.write_csv(path, truth);
                report_errors(r, truth);
            } else if (method == "all" || method.rfind("rmk22-", 0) == 0) {
                const double u1 = constant_of(s.u1, "scene.u1");
                const double v1 = constant_of(s.v1, "scene.v1");
                if (method == "all") {
                    const Recon1D r1 = invert_2d_constant(data, u1, v1, 1);
                    const Recon1D r2 = invert_2d_constant(data, u1, v1, 2);
                    const Recon1D r3 = invert_2d_constant(data, u1, v1, 3);
                    auto diff = [](const Recon1D& a, const Recon1D& b) {
                        double m = 0.0;
                        for (std::size_t i = 0; i < a.values.size(); ++i)
                            m = std::max(m, std::abs(a.values[i] - b.values[i]));
                        return m;
                    };
                    std::printf("pairwise max differences:\n");
                    std::printf("  rmk22-1 vs rmk22-2: %.6g\n", diff(r1, r2));
                    std::printf("  rmk22-1 vs rmk22-3: %.6g\n", diff(r1, r3));
                    std::printf("  rmk22-2 vs rmk22-3: %.6g\n", diff(r2, r3));
                    r1.write_csv(path, truth);
                    report_errors(r1, truth);
                } else {
                    const int formula = method.back() - '0';
                    const Recon1D r = invert_2d_constant(data, u1, v1, formula);
                    r.write_csv(path, truth);
                    report_errors(r, truth);
                }
            } else {
                throw ConfigError("task.method", "unknown method: " + method);
            }
        } else if (kind == "hyperplane") {
            const HyperplaneScene s = build_hyperplane_scene(cfg);
            require_assumptions(validate(s, 256));
            const double off = cfg.get_num_or("scene", "offset", 0.0);
            const Reduced1D line = fixed_theta_line(s, off);
            double total;
            if (args.total_integral)
                total = *args.total_integral;
            else
                total = line.sup_hi > line.sup_lo
                            ? integrate(line.profile, line.sup_lo, line.sup_hi, opt)
                            : 0.0;
            const Recon1D r = invert_fixed_theta_line(s, data, off, total);
            auto truth = [&line](double tau) { return line.profile(tau); };
            r.write_csv(path, truth);
            report_errors(r, truth);
        } else if (kind == "curve") {
            const CurveScene s = build_curve_scene(cfg);
            require_assumptions(validate(s));
            const CurveGeometry geom(s);
            const Recon1D r =
                invert_curve(s, geom, data, total_for(args, s.profile, opt));
            auto truth = [&s](double x) { return s.profile(x); };
            r.write_csv(path, truth);
            if (r.resampled) report_errors(r, truth);
        } else {
            throw ConfigError("scene.kind", "unknown kind: " + kind);
        }
        return kOk;
    });
}

// --- gauge --------------------------------------------------------------

int cmd_gauge(const CliArgs& args) {
    return guarded([&]() -> int {
        const RunConfig cfg = load_config(args.config_path);
        const QuadOptions opt = quad_options(cfg);
        const std::string gkind = cfg.get("gauge", "kind");
        GaugeReport rep;
        bool fail = false;

        if (gkind == "constant" || gkind == "general") {
            const auto b = cfg.get_nums("gauge", "box", 4);
            const SupportBox box{b[0], b[1], b[2], b[3]};
            const Expr phi = Expr::parse(cfg.get("gauge", "phi"), {"x", "y"});

            FieldExt u, v;
            if (gkind == "constant") {
                const auto u0 = cfg.get_nums("gauge", "u0", 2);
                const auto v0 = cfg.get_nums("gauge", "v0", 2);
                u = constant_field({u0[0], u0[1]});
                v = constant_field({v0[0], v0[1]});
            } else {
                u = {Expr::parse(cfg.get("gauge", "u_x"), {"x", "y"}),
                     Expr::parse(cfg.get("gauge", "u_y"), {"x", "y"})};
                v = {Expr::parse(cfg.get("gauge", "v_x"), {"x", "y"}),
                     Expr::parse(cfg.get("gauge", "v_y"), {"x", "y"})};
            }

            Expr f;
            if (gkind == "constant") {
                f = gauge_forward_constant(phi, {u.cx(0, 0), u.cy(0, 0)},
                                           {v.cx(0, 0), v.cy(0, 0)}, box);
            } else {
                const GeneralGauge gg = gauge_forward_general(phi, u, v, box);
                f = gg.f;
                std::printf("ordering_diff=%.6g\n", gg.ordering_diff);
            }

            auto field = [&f](double x, double y) { return f(x, y); };
            auto u1 = [&u](double x) { return u.cx(x, 0.0); };
            auto v1 = [&v](double x) { return v.cx(x, 0.0); };
            const double reach = box.y_hi * 3.0 + 1.0;
            const auto xg = linspace(box.x_lo - reach, box.x_hi + 1.0, 41);
            const auto dg = linspace(0.0, box.x_hi - box.x_lo + 2.0 * reach, 21);
            for (double x : xg)
                for (double d : dg)
                    rep.max_forward_residual =
                        std::max(rep.max_forward_residual,
                                 std::abs(hwt_field2d(field, box, u1, v1, x, d, opt)));
            fail = rep.max_forward_residual > 1e-7;

            if (gkind == "general" && !fail) {
                const NullPotential np =
                    potential_from_null_general(field, u, v, box, false, opt);
                rep.closedness_residual = np.report.closedness_residual;
                rep.pde_residuals = np.report.pde_residuals;
                rep.boundary_residual = np.report.boundary_residual;
                fail = rep.pde_residuals[0] > 1e-5 || rep.pde_residuals[1] > 1e-5;
            }
        } else if (gkind == "fixed_theta") {
            const HyperplaneScene s = build_hyperplane_scene(cfg);
            const auto b = cfg.get_nums("gauge", "box", 4);
            const SupportBox box2{b[0], b[1], b[2], b[3]};
            const double z_hi = cfg.get_num("gauge", "z_hi");
            const Expr phi = Expr::parse(cfg.get("gauge", "phi"), {"x1", "x2", "x3"});
            const double lu = s.lambda_u(0.0, 0.0), lv = s.lambda_v(0.0, 0.0);
            const Vec3 u0{lu * s.theta0.x(), lu * s.theta0.y(),
                          std::sqrt(1.0 - lu * lu)};
            const Vec3 v0{lv * s.theta0.x(), lv * s.theta0.y(),
                          std::sqrt(1.0 - lv * lv)};
            const Expr f = gauge_fixed_theta(phi, u0, v0, box2);
            auto field = [&f](double x, double y, double z) { return f(x, y, z); };
            const double reach = z_hi * 3.0 + 1.0;
            for (double tau : linspace(box2.x_lo - reach, box2.x_hi + 1.0, 25))
                for (double d : linspace(0.0, box2.x_hi - box2.x_lo + 2.0 * reach, 13))
                    rep.max_forward_residual = std::max(
                        rep.max_forward_residual,
                        std::abs(hwt_fixed_theta_field(s, field, box2, z_hi,
                                                       tau * s.theta0, d, opt)));
            fail = rep.max_forward_residual > 1e-7;
        } else if (gkind == "depth_null") {
            const HyperplaneScene s = build_hyperplane_scene(cfg);
            const auto b = cfg.get_nums("gauge", "box", 4);
            const SupportBox box2{b[0], b[1], b[2], b[3]};
            const double z_hi = cfg.get_num("gauge", "z_hi");
            const Expr h = Expr::parse(cfg.get("gauge", "h"), {"s"});
            // sweep ranges must keep the legs inside the lateral box until
            // the depth profile has decayed, so they come from the config
            const auto tr = cfg.get_nums("gauge", "tau", 3);
            const auto dr = cfg.get_nums("gauge", "d", 3);
            rep.max_forward_residual = depth_null_residual(
                s, h, box2, z_hi, linspace(tr[0], tr[1], static_cast<int>(tr[2])),
                linspace(dr[0], dr[1], static_cast<int>(dr[2])), opt);
            fail = rep.max_forward_residual > 1e-7;
        } else if (gkind == "curve") {
            const CurveScene s = build_curve_scene(cfg);
            const CurveGeometry geom(s);
            const auto b = cfg.get_nums("gauge", "box", 4);
            const SupportBox box{b[0], b[1], b[2], b[3]};
            const Expr phi = Expr::parse(cfg.get("gauge", "phi"), {"x", "y"});
            const auto u0n = cfg.get_nums("gauge", "u0", 2);
            const auto v0n = cfg.get_nums("gauge", "v0", 2);
            const Vec2 u0{u0n[0], u0n[1]}, v0{v0n[0], v0n[1]};
            // the gliding set is the curve, so phi must vanish along it
            double worst = 0.0;
            for (double t : linspace(geom.t_lo(), geom.t_hi(), 512)) {
                const Vec2 p = geom.point(t);
                worst = std::max(worst, std::abs(phi(p.x(), p.y())));
            }
            if (worst > 1e-10) throw BoundaryNonvanishing(worst);
            const Expr f = directional(directional(phi, v0), u0);
            auto field = [&f](const Vec2& p) { return f(p.x(), p.y()); };
            const double span = geom.length();
            for (double t0 : linspace(geom.t_lo(), geom.t_hi() - 0.25 * span, 17))
                for (double d : linspace(0.0, 0.25 * span, 9))
                    rep.max_forward_residual =
                        std::max(rep.max_forward_residual,
                                 std::abs(hwt_curve_field(geom, field, box, t0, d, opt)));
            fail = rep.max_forward_residual > 1e-7;
        } else {
            throw ConfigError("gauge.kind", "unknown kind: " + gkind);
        }

        std::printf("%s", rep.to_text().c_str());
        return fail ? kGaugeFail : kOk;
    });
}

// --- verify -------------------------------------------------------------

namespace {

struct CheckTable {
    bool all_ok = true;
    std::string first_fail;
    void row(const std::string& name, bool ok, double worst) {
        std::printf("%-44s %s   (worst %.6g)\n", name.c_str(), ok ? "PASS" : "FAIL",
                    worst);
        if (!ok && all_ok) first_fail = name;
        all_ok = all_ok && ok;
    }
};

int verify_flat(const RunConfig& cfg, const CliArgs& args) {
    const FlatScene2D s = build_flat_scene(cfg);
    require_assumptions(validate(s));
    const GridSpec grid = build_grid(cfg, true);
    QuadOptions tight = quad_options(cfg);
    tight.abs_tol = std::min(tight.abs_tol, 1e-12);
    tight.rel_tol = std::min(tight.rel_tol, 1e-11);
    const QuadOptions opt = quad_options(cfg);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> ux(grid.axis1.front(), grid.axis1.back());
    std::uniform_real_distribution<double> ud(0.0, grid.axis2.back());
    CheckTable tab;

    {
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const double x = ux(rng), d = ud(rng);
            worst = std::max(worst, std::abs(hwt_flat2d(s, x, d, opt) -
                                             hwt_flat2d_reduced(s, x, d, opt)));
        }
        tab.row("reduced vs geometric forward", worst <= 10.0 * opt.abs_tol, worst);
    }

    {
        double worst = 0.0;
        if (!args.data_path.empty()) {
            // finite differences of the supplied data grid against the
            // analytic derivative identities
            const DataGrid data = DataGrid::read_csv(args.data_path);
            const double h = data.axis1[1] - data.axis1[0];
            double scale = 1.0;
            for (Eigen::Index i = 0; i < data.values.rows(); ++i)
                scale = std::max(scale, std::abs(data.values(i, 0)));
            for (std::size_t i = 1; i + 1 < data.axis1.size(); ++i)
                for (std::size_t j = 0; j < data.axis2.size(); ++j) {
                    const auto I = static_cast<Eigen::Index>(i);
                    const auto J = static_cast<Eigen::Index>(j);
                    const double fd =
                        (data.values(I + 1, J) - data.values(I - 1, J)) / (2.0 * h);
                    const double an =
                        d_dx_data_analytic(s, data.axis1[i], data.axis2[j], tight);
                    worst = std::max(worst, std::abs(fd - an));
                }
            tab.row("derivative identity (data grid)",
                    worst <= 1e-6 + 10.0 * h * h * scale, worst);
        } else {
            const double h = 1e-4;
            for (int k = 0; k < 100; ++k) {
                const double x = ux(rng), d = ud(rng);
                const double fdx = (hwt_flat2d_reduced(s, x + h, d, tight) -
                                    hwt_flat2d_reduced(s, x - h, d, tight)) /
                                   (2.0 * h);
                const double fdd = (hwt_flat2d_reduced(s, x, d + h, tight) -
                                    hwt_flat2d_reduced(s, x, d - h, tight)) /
                                   (2.0 * h);
                worst = std::max(worst,
                                 std::abs(fdx - d_dx_data_analytic(s, x, d, tight)));
                worst = std::max(worst,
                                 std::abs(fdd - d_dd_data_analytic(s, x, d, tight)));
            }
            tab.row("derivative identities", worst <= 1e-6, worst);
        }
    }

    {
        FlatScene2D s2 = s;
        s2.profile.expr = 2.0 * s.profile.expr;
        s2.profile.total_integral.reset();
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double x = ux(rng), d = ud(rng);
            worst = std::max(worst, std::abs(hwt_flat2d_reduced(s2, x, d, opt) -
                                             2.0 * hwt_flat2d_reduced(s, x, d, opt)));
        }
        tab.row("linearity", worst <= 10.0 * opt.abs_tol, worst);
    }

    {
        auto fwd = [&](double x, double d) { return hwt_flat2d_reduced(s, x, d, tight); };
        const Recon1D r = invert_2d_variable(s, fwd, linspace(s.recon_lo, s.recon_hi, 101),
                                             1e-4, s.profile.integral(tight));
        double worst = 0.0;
        for (std::size_t i = 0; i < r.grid.size(); ++i)
            worst = std::max(worst, std::abs(r.values[i] - s.profile(r.grid[i])));
        tab.row("inversion round trip", worst <= 1e-4, worst);
    }

    if (!tab.all_ok) {
        std::cerr << "first failing check: " << tab.first_fail << "\n";
        return kVerifyFail;
    }
    return kOk;
}

int verify_curve(const RunConfig& cfg) {
    const CurveScene s = build_curve_scene(cfg);
    require_assumptions(validate(s));
    const CurveGeometry geom(s);
    QuadOptions tight = quad_options(cfg);
    tight.abs_tol = std::min(tight.abs_tol, 1e-12);
    tight.rel_tol = std::min(tight.rel_tol, 1e-11);
    CheckTable tab;

    auto fwd = [&](double t0, double d) { return hwt_curve_reduced(s, geom, t0, d, tight); };
    const Recon1D r = invert_curve(s, geom, fwd, linspace(s.recon_lo, s.recon_hi, 101),
                                   1e-4, s.profile.integral(tight));
    double worst = 0.0;
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        worst = std::max(worst, std::abs(r.values[i] - s.profile(r.grid[i])));
    tab.row("curve inversion round trip", r.resampled && worst <= 1e-3, worst);

    if (!tab.all_ok) {
        std::cerr << "first failing check: " << tab.first_fail << "\n";
        return kVerifyFail;
    }
    return kOk;
}

int verify_hyperplane(const RunConfig& cfg) {
    const HyperplaneScene s = build_hyperplane_scene(cfg);
    require_assumptions(validate(s, 256));
    QuadOptions tight = quad_options(cfg);
    tight.abs_tol = std::min(tight.abs_tol, 1e-12);
    tight.rel_tol = std::min(tight.rel_tol, 1e-11);
    const GridSpec grid = build_grid(cfg, true);
    CheckTable tab;

    const double off = cfg.get_num_or("scene", "offset", 0.0);
    const Reduced1D line = fixed_theta_line(s, off);
    const double total = line.sup_hi > line.sup_lo
                             ? integrate(line.profile, line.sup_lo, line.sup_hi, tight)
                             : 0.0;
    const Vec2 thp{-s.theta0.y(), s.theta0.x()};
    auto fwd = [&](const Vec2& xp, double d) { return hwt_fixed_theta(s, xp, d, tight); };
    const Recon2D r = invert_fixed_theta(s, fwd, grid.axis1, {off}, 1e-4, {{off, total}});
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
        const Vec2 p = off * thp + grid.axis1[i] * s.theta0;
        worst = std::max(worst, std::abs(r.values(static_cast<Eigen::Index>(i), 0) -
                                         s.profile_nd(p.x(), p.y())));
    }
    tab.row("fixed-theta inversion round trip", worst <= 1e-3, worst);

    if (!tab.all_ok) {
        std::cerr << "first failing check: " << tab.first_fail << "\n";
        return kVerifyFail;
    }
    return kOk;
}

} // namespace

int cmd_verify(const CliArgs& args) {
    return guarded([&]() -> int {
        const RunConfig cfg = load_config(args.config_path);
        const std::string kind = scene_kind(cfg);
        if (kind == "flat2d") return verify_flat(cfg, args);
        if (kind == "curve") return verify_curve(cfg);
        if (kind == "hyperplane") return verify_hyperplane(cfg);
        throw ConfigError("scene.kind", "unknown kind: " + kind);
    });
}

int cmd_check(const CliArgs& args) {
    return guarded([&]() -> int {
        const RunConfig cfg = load_config(args.config_path);
        const std::string kind = scene_kind(cfg);
        AssumptionReport rep;
        if (kind == "flat2d")
            rep = validate(build_flat_scene(cfg));
        else if (kind == "hyperplane")
            rep = validate(build_hyperplane_scene(cfg), 256);
        else if (kind == "curve")
            rep = validate(build_curve_scene(cfg));
        else
            throw ConfigError("scene.kind", "unknown kind: " + kind);
        std::printf("%s", rep.to_string().c_str());
        return rep.ok() ? kOk : kSceneFail;
    });
}

} // namespace headwave
