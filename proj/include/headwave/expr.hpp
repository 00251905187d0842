#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "headwave/errors.hpp"

namespace headwave {

/// Parsed closed-form arithmetic expression in up to three named variables.
///
/// Supported functions: sin, cos, tan, tanh, sech, exp, log, sqrt, abs,
/// pow(a,b); constants pi and e. Precedence (low to high): + - , * /,
/// unary minus, ^ (right-associative), atoms. Immutable after parse;
/// eval and derivative are pure.
class Expr {
public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    enum class Kind { Num, Var, Neg, Fun, Add, Sub, Mul, Div, Pow };
    enum class Fn { Sin, Cos, Tan, Tanh, Sech, Exp, Log, Sqrt, Abs };

    struct Node {
        Kind kind;
        double value = 0.0;  // Num
        int var = -1;        // Var: index into variables()
        Fn fn = Fn::Sin;     // Fun
        NodePtr a, b;
    };

    Expr() = default;
    Expr(NodePtr root, std::vector<std::string> vars)
        : root_(std::move(root)), vars_(std::move(vars)) {}

    static Expr parse(std::string_view source, std::vector<std::string> variables);
    static Expr constant(double c, std::vector<std::string> variables = {});

    double eval(std::span<const double> values) const;
    double eval(const std::map<std::string, double>& bindings) const;
    double operator()(double x) const { return eval(std::span<const double>(&x, 1)); }
    double operator()(double x, double y) const {
        const double v[2] = {x, y};
        return eval(std::span<const double>(v, 2));
    }
    double operator()(double x, double y, double z) const {
        const double v[3] = {x, y, z};
        return eval(std::span<const double>(v, 3));
    }

    Expr derivative(const std::string& var) const;
    Expr derivative(int var_index) const;

    std::string print() const;

    const std::vector<std::string>& variables() const { return vars_; }
    const NodePtr& root() const { return root_; }
    bool empty() const { return !root_; }

    /// Same tree, reinterpreted over a new (superset-compatible) variable
    /// list; index_map[i] gives the new index of old variable i.
    Expr remap(std::vector<std::string> new_vars, const std::vector<int>& index_map) const;

private:
    NodePtr root_;
    std::vector<std::string> vars_;
};

/// Structural equality of trees (used by the parse-print-parse fixpoint test).
bool structurally_equal(const Expr::NodePtr& a, const Expr::NodePtr& b);

// Tree combinators with best-effort constant folding. Operands must share
// the same variable list; the result takes it from the left operand.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator*(double c, const Expr& e);
Expr operator-(const Expr& e);
Expr apply_fn(Expr::Fn f, const Expr& e);

} // namespace headwave
