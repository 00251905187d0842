#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "headwave/expr.hpp"
#include "headwave/scene.hpp"
#include "headwave/transform.hpp"

namespace headwave {

using Vec3 = Eigen::Vector3d;

/// Residuals certifying a kernel construction.
struct GaugeReport {
    double max_forward_residual = 0.0;
    double closedness_residual = 0.0;
    std::array<double, 2> pde_residuals{0.0, 0.0};
    double boundary_residual = 0.0;

    std::string to_text() const;  // flat key=value block
};

/// Extended plane vector field given componentwise, variables (x, y).
struct FieldExt {
    Expr cx, cy;
    Vec2 operator()(double x, double y) const { return {cx(x, y), cy(x, y)}; }
};

FieldExt constant_field(const Vec2& w);

/// Directional derivative w . grad phi as a symbolic expression.
Expr directional(const Expr& phi, const Vec2& w);
Expr directional3(const Expr& phi, const Vec3& w);

// --- constant-field kernel (two nested directional derivatives) --------

/// f = grad_u0 grad_v0 phi, exact via symbolic differentiation. Requires
/// phi to vanish on {y=0} (checked on a lattice over the box, tol 1e-10).
Expr gauge_forward_constant(const Expr& phi, const Vec2& u0, const Vec2& v0,
                            const SupportBox& box);

struct PotentialPair {
    std::function<double(double, double)> psi, phi;
};

/// Reconstructs potentials for a claimed null field with constant u0, v0:
/// psi integrates f backwards along the u-ray to {y=0}, phi repeats the
/// construction on psi with v. The claim R f = 0 is spot-checked first.
PotentialPair potentials_from_null_constant(
    const std::function<double(double, double)>& f, const SupportBox& box,
    const Vec2& u0, const Vec2& v0, const QuadOptions& opt = {});

// --- general flat kernel (P-operator composition) ----------------------

struct GeneralGauge {
    Expr f;              // P_u(det^-1 P_v phi)
    Expr f_alt;          // P_v(det^-1 P_u phi)
    double ordering_diff = 0.0;  // max pointwise difference on a lattice
};

/// Requires the extensions to have straight integral curves (residual
/// |(w.grad)w| <= 1e-6 on a lattice) and |det A_{u,v}| >= 1e-9 on the box;
/// phi must vanish on {y=0}.
GeneralGauge gauge_forward_general(const Expr& phi, const FieldExt& u,
                                   const FieldExt& v, const SupportBox& box);

/// Max lattice residual of the divergence compatibility condition
/// |div(u) int f(p+su) ds - div(v) int f(p+sv) ds|.
double check_div_condition(const std::function<double(double, double)>& f,
                           const FieldExt& u, const FieldExt& v, const SupportBox& box,
                           int lattice = 64, const QuadOptions& opt = {});

struct NullPotential {
    std::function<double(double, double)> psi_u, psi_v;
    std::function<double(double, double)> omega_x, omega_y;
    std::function<double(double, double)> phi;      // staircase: right, then up
    std::function<double(double, double)> phi_alt;  // staircase: up, then right
    Vec2 base;                                      // staircase base point
    GaugeReport report;  // closedness and boundary residuals filled
};

/// Recovers the potential of a null field from the closed 1-form built out
/// of the two ray integrals. `curve_convention` selects the sign bookkeeping
/// of the curved-gliding variant (the assembled 1-form, and hence phi, is
/// the same).
NullPotential potential_from_null_general(
    const std::function<double(double, double)>& f, const FieldExt& u,
    const FieldExt& v, const SupportBox& box, bool curve_convention = false,
    const QuadOptions& opt = {});

// --- fixed-theta and depth constructions (n = 3) ------------------------

/// g(x) = h'(x_3) is annihilated whenever h(0) = h'(0) = 0 and h decays.
/// Returns the symbolic h'.
Expr depth_null_generator(const Expr& h);

/// Max |R g| of the depth field over a (tau, d) sweep along theta0.
double depth_null_residual(const HyperplaneScene& s, const Expr& h,
                           const SupportBox& box2, double z_hi,
                           const std::vector<double>& tau_grid,
                           const std::vector<double>& d_grid,
                           const QuadOptions& opt = {});

/// f = grad_u grad_v phi for x'-independent (constant) 3D fields; phi must
/// vanish on {x_3 = 0} over box2 (tol 1e-10).
Expr gauge_fixed_theta(const Expr& phi, const Vec3& u0, const Vec3& v0,
                       const SupportBox& box2);

} // namespace headwave
