#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace headwave {

// Expression layer

struct SyntaxError : std::runtime_error {
    std::size_t offset;
    std::vector<std::string> expected;
    SyntaxError(std::size_t off, std::vector<std::string> exp, const std::string& msg)
        : std::runtime_error(msg), offset(off), expected(std::move(exp)) {}
};

struct UnknownFunction : std::runtime_error {
    std::string name;
    explicit UnknownFunction(std::string n)
        : std::runtime_error("unknown function: " + n), name(std::move(n)) {}
};

struct UnknownVariable : std::runtime_error {
    std::string name;
    explicit UnknownVariable(std::string n)
        : std::runtime_error("unknown variable: " + n), name(std::move(n)) {}
};

struct DomainError : std::runtime_error {
    std::string op;
    double operand;
    DomainError(std::string o, double x)
        : std::runtime_error("domain error in " + o), op(std::move(o)), operand(x) {}
};

struct NonDifferentiable : std::runtime_error {
    std::string op;
    explicit NonDifferentiable(std::string o)
        : std::runtime_error("non-differentiable operation: " + o), op(std::move(o)) {}
};

// Numerics layer

struct QuadratureNonConvergence : std::runtime_error {
    explicit QuadratureNonConvergence(const std::string& what)
        : std::runtime_error("quadrature failed to converge: " + what) {}
};

struct SceneIllFormed : std::runtime_error {
    explicit SceneIllFormed(const std::string& reason)
        : std::runtime_error("scene ill-formed: " + reason) {}
};

struct LatticeTooCoarse : std::runtime_error {
    explicit LatticeTooCoarse(const std::string& what)
        : std::runtime_error("validation lattice too coarse: " + what) {}
};

struct SceneInvalid : std::runtime_error {
    explicit SceneInvalid(const std::string& what)
        : std::runtime_error("scene failed assumption checks: " + what) {}
};

struct OutsideTube : std::runtime_error {
    OutsideTube() : std::runtime_error("point outside the tubular neighborhood") {}
};

struct NewtonDivergence : std::runtime_error {
    NewtonDivergence() : std::runtime_error("nearest-point iteration did not converge") {}
};

struct LegExitsTube : std::runtime_error {
    explicit LegExitsTube(const std::string& what)
        : std::runtime_error("straight leg leaves the tube with nonzero integrand: " + what) {}
};

// Inversion layer

struct DegenerateDenominator : std::runtime_error {
    double location;
    double magnitude;
    DegenerateDenominator(double x, double mag)
        : std::runtime_error("degenerate inversion denominator"), location(x), magnitude(mag) {}
};

struct InsufficientGrid : std::runtime_error {
    explicit InsufficientGrid(const std::string& what)
        : std::runtime_error("insufficient data grid: " + what) {}
};

struct SingularCoefficient : std::runtime_error {
    explicit SingularCoefficient(const std::string& what)
        : std::runtime_error("singular inversion coefficient: " + what) {}
};

struct MissingLineIntegral : std::runtime_error {
    double offset;
    explicit MissingLineIntegral(double off)
        : std::runtime_error("missing total line integral for offset"), offset(off) {}
};

struct NoLimit : std::runtime_error {
    NoLimit() : std::runtime_error("probe sequence is not Cauchy; no limit detected") {}
};

struct ZeroC : std::runtime_error {
    ZeroC() : std::runtime_error("asymptotic coefficient C vanishes") {}
};

struct NonMonotoneGamma1 : std::runtime_error {
    NonMonotoneGamma1() : std::runtime_error("gamma_1 is not monotone; resampling undefined") {}
};

// Gauge layer

struct BoundaryNonvanishing : std::runtime_error {
    double residual;
    explicit BoundaryNonvanishing(double r)
        : std::runtime_error("potential does not vanish on the gliding set"), residual(r) {}
};

struct NotNull : std::runtime_error {
    double witness_x, witness_d, value;
    NotNull(double x, double d, double v)
        : std::runtime_error("claimed null function has nonzero transform"),
          witness_x(x), witness_d(d), value(v) {}
};

struct SingularFrame : std::runtime_error {
    explicit SingularFrame(double det)
        : std::runtime_error("frame determinant below threshold: " + std::to_string(det)) {}
};

struct ExtensionNotStraight : std::runtime_error {
    double residual;
    explicit ExtensionNotStraight(double r)
        : std::runtime_error("integral curves of the extension are not straight"), residual(r) {}
};

struct DivConditionViolated : std::runtime_error {
    double residual;
    explicit DivConditionViolated(double r)
        : std::runtime_error("divergence compatibility condition violated"), residual(r) {}
};

struct NotClosed : std::runtime_error {
    double residual;
    explicit NotClosed(double r)
        : std::runtime_error("1-form is not closed within tolerance"), residual(r) {}
};

struct HConditionViolated : std::runtime_error {
    explicit HConditionViolated(const std::string& what)
        : std::runtime_error("depth profile h violates h(0)=h'(0)=0: " + what) {}
};

} // namespace headwave
