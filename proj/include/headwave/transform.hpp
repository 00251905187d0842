#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "headwave/quadrature.hpp"
#include "headwave/scene.hpp"

namespace headwave {

/// Sampled transform data on a uniform (axis1, axis2=d) lattice.
/// axis1 is x for flat scenes, the coordinate along theta0 for hyperplane
/// scenes, or t0 for curve scenes. axis2 must start at d = 0.
struct DataGrid {
    std::vector<double> axis1;
    std::vector<double> axis2;
    Eigen::MatrixXd values;  // axis1.size() rows, axis2.size() cols
    std::uint64_t scene_hash = 0;
    double quad_tol = 1e-10;

    void write_csv(const std::string& path) const;
    static DataGrid read_csv(const std::string& path);
};

std::vector<double> linspace(double lo, double hi, int n);

/// Reduced one-dimensional description of a gliding configuration:
/// everything the simplified transform formula needs.
struct Reduced1D {
    std::function<double(double)> u1, v1;       // of the gliding coordinate
    std::function<double(double)> profile;
    double sup_lo = 0.0, sup_hi = 0.0;          // declared profile support
    std::function<double(double)> gamma1;       // identity for flat scenes
};

/// -1/u1(x) * int_{-inf}^{g1(x)} f~  +  int_0^d f~(g1(x+t)) dt
///  + 1/v1(x+d) * int_{g1(x+d)}^{inf} f~,  support-clipped.
double reduced_forward(const Reduced1D& r, double x, double d,
                       const QuadOptions& opt = {});

// --- flat 2D -----------------------------------------------------------

/// Full geometric three-leg quadrature (profile or field mode).
double hwt_flat2d(const FlatScene2D& s, double x, double d,
                  const QuadOptions& opt = {});

/// Simplified profile-mode formula.
double hwt_flat2d_reduced(const FlatScene2D& s, double x, double d,
                          const QuadOptions& opt = {});

/// Three-leg transform of an arbitrary evaluable field supported in `box`,
/// with leg directions from the scene's u1/v1 expressions.
double hwt_field2d(const std::function<double(double, double)>& f,
                   const SupportBox& box, const Expr& u1, const Expr& v1,
                   double x, double d, const QuadOptions& opt = {});
double hwt_field2d(const std::function<double(double, double)>& f,
                   const SupportBox& box, const std::function<double(double)>& u1,
                   const std::function<double(double)>& v1, double x, double d,
                   const QuadOptions& opt = {});

// --- fixed-theta hyperplane (n = 3) ------------------------------------

double hwt_fixed_theta(const HyperplaneScene& s, const Vec2& xp, double d,
                       const QuadOptions& opt = {});

/// View of the scene restricted to the line xp + tau * theta0 through the
/// point with offset `off` along theta0-perp; axis1 of a per-line DataGrid
/// is the tau coordinate.
Reduced1D fixed_theta_line(const HyperplaneScene& s, double off);

/// Transform of a genuine 3D field f(x1,x2,x3) supported in box2 x
/// [0, z_hi]; used by the gauge verification sweeps.
double hwt_fixed_theta_field(const HyperplaneScene& s,
                             const std::function<double(double, double, double)>& f,
                             const SupportBox& box2, double z_hi, const Vec2& xp,
                             double d, const QuadOptions& opt = {});

// --- gliding curve -----------------------------------------------------

/// Full geometric version: f reconstructed from the profile through the
/// tube frame, straight legs clipped at the tube boundary.
double hwt_curve(const CurveScene& s, const CurveGeometry& geom, double t0,
                 double d, const QuadOptions& opt = {});

/// Reduced version via gamma1(t) = gamma(t) . gamma'(t).
double hwt_curve_reduced(const CurveScene& s, const CurveGeometry& geom,
                         double t0, double d, const QuadOptions& opt = {});

Reduced1D curve_reduced_view(const CurveScene& s, const CurveGeometry& geom);

/// Transform of an arbitrary evaluable plane field along the curve's legs.
double hwt_curve_field(const CurveGeometry& geom,
                       const std::function<double(const Vec2&)>& f,
                       const SupportBox& box, double t0, double d,
                       const QuadOptions& opt = {});

// --- sweeps ------------------------------------------------------------

/// Fills a DataGrid from a forward evaluator; parallel over nodes
/// (HEADWAVE_THREADS caps the worker count, 0 or unset = auto), output
/// independent of scheduling. Node failures rethrow with coordinates.
DataGrid sweep(const std::function<double(double, double)>& fwd,
               std::vector<double> axis1, std::vector<double> axis2,
               std::uint64_t scene_hash = 0, double quad_tol = 1e-10);

DataGrid sweep(const FlatScene2D& s, std::vector<double> x_grid,
               std::vector<double> d_grid, std::uint64_t scene_hash = 0,
               const QuadOptions& opt = {});

DataGrid sweep(const CurveScene& s, const CurveGeometry& geom,
               std::vector<double> t0_grid, std::vector<double> d_grid,
               std::uint64_t scene_hash = 0, const QuadOptions& opt = {});

} // namespace headwave
