#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "headwave/scene.hpp"
#include "headwave/transform.hpp"

namespace headwave {

struct Recon1D {
    std::vector<double> grid;    // x, t0, or the resampled profile argument
    std::vector<double> values;  // reconstructed profile samples
    double denom_min = 0.0;      // smallest |denominator| encountered
    std::string method;          // thm21 | rmk22-1..3 | thm31 | thm41
    // Curve reconstructions: the (gamma1(t0), value) pairs before
    // resampling. `resampled` is false when gamma1 was not monotone.
    bool resampled = true;
    std::vector<double> raw_args, raw_values;

    void write_csv(const std::string& path,
                   const std::function<double(double)>& truth = {}) const;
};

struct Recon2D {
    std::vector<double> axis_tau;  // coordinate along theta0
    std::vector<double> axis_off;  // coordinate along theta0-perp
    Eigen::MatrixXd values;        // axis_tau.size() x axis_off.size()
    double denom_min = 0.0;
};

/// Node inputs for the shared algebraic inversion core. g1p is the
/// derivative of the gliding-coordinate map (identically 1 for flat
/// scenes). Dx and Dd are the two measured data derivatives at d = 0.
struct CoreNode {
    double u1, v1, du1, dv1, g1p;
    double Dx, Dd;
};

/// One node of the inversion formula; fills |denominator| into denom_out
/// and throws DegenerateDenominator when it is below the threshold.
double invert_core_node(const CoreNode& n, double total_integral, double location,
                        double& denom_out);

// --- 2D flat -----------------------------------------------------------

Recon1D invert_2d_variable(const FlatScene2D& s, const DataGrid& data,
                           double total_integral);
Recon1D invert_2d_variable(const FlatScene2D& s,
                           const std::function<double(double, double)>& fwd,
                           const std::vector<double>& x_grid, double fd_step,
                           double total_integral);

Recon1D invert_2d_constant(const DataGrid& data, double u1, double v1, int formula);

/// Ratio in the constant-field partial-data recursion
/// f~(x + d0) = C f~(x).
double partial_data_C(double u1, double v1);

struct NullityResult {
    bool consistent_with_zero = false;
    double violation_x = 0.0;
    double C = 0.0;
    double max_residual = 0.0;
};

/// Checks a single data row R f(., d0) for consistency with f~ = 0. When a
/// candidate profile is supplied, evaluates the recursion residual
/// |f~(x+d0) - C f~(x)| (profile clamped to zero outside its support) and
/// flags the worst offender.
NullityResult partial_data_nullity_check(
    const std::vector<double>& x_grid, const std::vector<double>& row_d0, double u1,
    double v1, double d0, double sup_lo, double sup_hi,
    const std::function<double(double)>& candidate = {});

// --- fixed-theta hyperplane --------------------------------------------

/// Line-by-line inversion over a (tau, offset) reconstruction lattice.
/// `fwd` evaluates the forward transform at (x', d); total line integrals
/// are keyed by the offset coordinate along theta0-perp.
Recon2D invert_fixed_theta(const HyperplaneScene& s,
                           const std::function<double(const Vec2&, double)>& fwd,
                           const std::vector<double>& tau_grid,
                           const std::vector<double>& off_grid, double fd_step,
                           const std::map<double, double>& total_line_integrals);

Recon1D invert_fixed_theta_line(const HyperplaneScene& s, const DataGrid& data,
                                double off, double total_line_integral);

struct XrayLimit {
    double raw_limit = 0.0;       // limit of d/dd R f|_{d=0} along the probes
    double C = 0.0;               // asymptotic value of D_theta0 beta
    double xray_estimate = 0.0;   // raw_limit / (-C)
    std::vector<double> raw_values;
};

XrayLimit xray_limit(const HyperplaneScene& s,
                     const std::function<double(const Vec2&, double)>& fwd,
                     const Vec2& xp, std::vector<double> s_probe,
                     double fd_step = 1e-4);

// --- gliding curve -----------------------------------------------------

Recon1D invert_curve(const CurveScene& s, const CurveGeometry& geom,
                     const DataGrid& data, double total_integral);
Recon1D invert_curve(const CurveScene& s, const CurveGeometry& geom,
                     const std::function<double(double, double)>& fwd,
                     const std::vector<double>& t0_grid, double fd_step,
                     double total_integral);

// --- analytic data derivatives (algebra validation) --------------------

/// Exact d/dx R f(x, d) for a profile-mode flat scene, with the profile
/// integrals evaluated by direct quadrature.
double d_dx_data_analytic(const FlatScene2D& s, double x, double d,
                          const QuadOptions& opt = {});
/// Exact d/dd R f(x, d).
double d_dd_data_analytic(const FlatScene2D& s, double x, double d,
                          const QuadOptions& opt = {});

} // namespace headwave
