#include "headwave/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>

namespace headwave {

namespace {

using NodePtr = Expr::NodePtr;
using Kind = Expr::Kind;
using Fn = Expr::Fn;

NodePtr num(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Num;
    n->value = v;
    return n;
}

NodePtr var(int idx) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Var;
    n->var = idx;
    return n;
}

NodePtr node(Kind k, NodePtr a, NodePtr b = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr fun(Fn f, NodePtr a) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Fun;
    n->fn = f;
    n->a = std::move(a);
    return n;
}

bool is_num(const NodePtr& n, double v) {
    return n->kind == Kind::Num && n->value == v;
}

double apply_fn(Fn f, double x) {
    switch (f) {
        case Fn::Sin: return std::sin(x);
        case Fn::Cos: return std::cos(x);
        case Fn::Tan: return std::tan(x);
        case Fn::Tanh: return std::tanh(x);
        case Fn::Sech: return 1.0 / std::cosh(x);
        case Fn::Exp: return std::exp(x);
        case Fn::Log:
            if (x <= 0.0) throw DomainError("log", x);
            return std::log(x);
        case Fn::Sqrt:
            if (x < 0.0) throw DomainError("sqrt", x);
            return std::sqrt(x);
        case Fn::Abs: return std::abs(x);
    }
    throw DomainError("fn", x);
}

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Tan: return "tan";
        case Fn::Tanh: return "tanh";
        case Fn::Sech: return "sech";
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
        case Fn::Sqrt: return "sqrt";
        case Fn::Abs: return "abs";
    }
    return "?";
}

std::optional<Fn> fn_by_name(std::string_view s) {
    static const std::pair<std::string_view, Fn> table[] = {
        {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},
        {"tanh", Fn::Tanh}, {"sech", Fn::Sech}, {"exp", Fn::Exp},
        {"log", Fn::Log},   {"sqrt", Fn::Sqrt}, {"abs", Fn::Abs}};
    for (const auto& [name, f] : table)
        if (name == s) return f;
    return std::nullopt;
}

double eval_node(const NodePtr& n, std::span<const double> v) {
    double r;
    switch (n->kind) {
        case Kind::Num: return n->value;
        case Kind::Var: return v[static_cast<std::size_t>(n->var)];
        case Kind::Neg: return -eval_node(n->a, v);
        case Kind::Fun: {
            r = apply_fn(n->fn, eval_node(n->a, v));
            break;
        }
        case Kind::Add: r = eval_node(n->a, v) + eval_node(n->b, v); break;
        case Kind::Sub: r = eval_node(n->a, v) - eval_node(n->b, v); break;
        case Kind::Mul: r = eval_node(n->a, v) * eval_node(n->b, v); break;
        case Kind::Div: {
            const double den = eval_node(n->b, v);
            if (den == 0.0) throw DomainError("divide", den);
            r = eval_node(n->a, v) / den;
            break;
        }
        case Kind::Pow: r = std::pow(eval_node(n->a, v), eval_node(n->b, v)); break;
        default: throw DomainError("node", 0.0);
    }
    if (!std::isfinite(r)) throw DomainError("overflow", r);
    return r;
}

// Folding constructors: constant subtrees collapse, obvious identities
// simplify. Folding is best-effort; a fold that would raise a DomainError
// is left symbolic.

NodePtr try_fold(NodePtr n) {
    const bool all_const =
        (!n->a || n->a->kind == Kind::Num) && (!n->b || n->b->kind == Kind::Num);
    if (n->kind != Kind::Num && n->kind != Kind::Var && all_const) {
        try {
            return num(eval_node(n, {}));
        } catch (const DomainError&) {
        }
    }
    return n;
}

NodePtr mk_neg(NodePtr a) {
    if (a->kind == Kind::Num) return num(-a->value);
    if (a->kind == Kind::Neg) return a->a;
    return node(Kind::Neg, std::move(a));
}

NodePtr mk_add(NodePtr a, NodePtr b) {
    if (is_num(a, 0.0)) return b;
    if (is_num(b, 0.0)) return a;
    return try_fold(node(Kind::Add, std::move(a), std::move(b)));
}

NodePtr mk_sub(NodePtr a, NodePtr b) {
    if (is_num(b, 0.0)) return a;
    if (is_num(a, 0.0)) return mk_neg(std::move(b));
    return try_fold(node(Kind::Sub, std::move(a), std::move(b)));
}

NodePtr mk_mul(NodePtr a, NodePtr b) {
    if (is_num(a, 0.0) || is_num(b, 0.0)) return num(0.0);
    if (is_num(a, 1.0)) return b;
    if (is_num(b, 1.0)) return a;
    if (is_num(a, -1.0)) return mk_neg(std::move(b));
    if (is_num(b, -1.0)) return mk_neg(std::move(a));
    return try_fold(node(Kind::Mul, std::move(a), std::move(b)));
}

NodePtr mk_div(NodePtr a, NodePtr b) {
    if (is_num(a, 0.0) && !is_num(b, 0.0)) return num(0.0);
    if (is_num(b, 1.0)) return a;
    return try_fold(node(Kind::Div, std::move(a), std::move(b)));
}

NodePtr mk_pow(NodePtr a, NodePtr b) {
    if (is_num(b, 1.0)) return a;
    if (is_num(b, 0.0)) return num(1.0);
    return try_fold(node(Kind::Pow, std::move(a), std::move(b)));
}

NodePtr mk_fun(Fn f, NodePtr a) {
    return try_fold(fun(f, std::move(a)));
}

// --- Recursive-descent parser ------------------------------------------

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& vars)
        : src_(src), vars_(vars) {}

    NodePtr run() {
        NodePtr e = additive(0);
        skip_ws();
        if (pos_ != src_.size())
            fail({"end of input", "operator"});
        return e;
    }

private:
    static constexpr int kMaxDepth = 256;

    std::string_view src_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(std::vector<std::string> expected) {
        throw SyntaxError(pos_, std::move(expected),
                          "parse error at byte " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < src_.size() &&
               std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    void check_depth(int depth) {
        if (depth > kMaxDepth) fail({"shallower expression"});
    }

    NodePtr additive(int depth) {
        check_depth(depth);
        NodePtr e = multiplicative(depth + 1);
        for (;;) {
            if (eat('+'))
                e = node(Kind::Add, std::move(e), multiplicative(depth + 1));
            else if (eat('-'))
                e = node(Kind::Sub, std::move(e), multiplicative(depth + 1));
            else
                return e;
        }
    }

    NodePtr multiplicative(int depth) {
        check_depth(depth);
        NodePtr e = unary(depth + 1);
        for (;;) {
            if (eat('*'))
                e = node(Kind::Mul, std::move(e), unary(depth + 1));
            else if (eat('/'))
                e = node(Kind::Div, std::move(e), unary(depth + 1));
            else
                return e;
        }
    }

    NodePtr unary(int depth) {
        check_depth(depth);
        if (eat('-')) return node(Kind::Neg, unary(depth + 1));
        return power(depth + 1);
    }

    NodePtr power(int depth) {
        check_depth(depth);
        NodePtr base = atom(depth + 1);
        if (eat('^'))  // right-associative: exponent may itself be a power
            return node(Kind::Pow, std::move(base), unary(depth + 1));
        return base;
    }

    NodePtr atom(int depth) {
        check_depth(depth);
        skip_ws();
        if (pos_ >= src_.size()) fail({"number", "variable", "function", "("});
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = additive(depth + 1);
            if (!eat(')')) fail({")"});
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return identifier(depth);
        fail({"number", "variable", "function", "("});
    }

    NodePtr number() {
        const char* begin = src_.data() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || !std::isfinite(v)) fail({"number"});
        // strtod accepts leading signs and hex; restrict to plain decimals.
        pos_ += static_cast<std::size_t>(end - begin);
        return num(v);
    }

    NodePtr identifier(int depth) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (peek() == '(') {
            if (name == "pow") {
                eat('(');
                NodePtr a = additive(depth + 1);
                if (!eat(',')) fail({","});
                NodePtr b = additive(depth + 1);
                if (!eat(')')) fail({")"});
                return node(Kind::Pow, std::move(a), std::move(b));
            }
            const auto f = fn_by_name(name);
            if (!f) throw UnknownFunction(std::string(name));
            eat('(');
            NodePtr a = additive(depth + 1);
            if (!eat(')')) fail({")"});
            return fun(*f, std::move(a));
        }
        if (name == "pi") return num(M_PI);
        if (name == "e") return num(M_E);
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name) return var(static_cast<int>(i));
        throw UnknownVariable(std::string(name));
    }
};

// --- Printer -----------------------------------------------------------

int level(const NodePtr& n) {
    switch (n->kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

void print_node(const NodePtr& n, const std::vector<std::string>& vars,
                std::string& out) {
    auto child = [&](const NodePtr& c, bool parens) {
        if (parens) out += '(';
        print_node(c, vars, out);
        if (parens) out += ')';
    };
    switch (n->kind) {
        case Kind::Num: {
            char buf[40];
            if (n->value < 0) {
                std::snprintf(buf, sizeof buf, "(%.17g)", n->value);
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", n->value);
            }
            out += buf;
            break;
        }
        case Kind::Var:
            out += vars[static_cast<std::size_t>(n->var)];
            break;
        case Kind::Neg:
            out += '-';
            child(n->a, level(n->a) < 3);
            break;
        case Kind::Fun:
            out += fn_name(n->fn);
            out += '(';
            print_node(n->a, vars, out);
            out += ')';
            break;
        case Kind::Add:
        case Kind::Sub:
            child(n->a, level(n->a) < 1);
            out += (n->kind == Kind::Add) ? '+' : '-';
            child(n->b, level(n->b) <= 1);
            break;
        case Kind::Mul:
        case Kind::Div:
            child(n->a, level(n->a) < 2);
            out += (n->kind == Kind::Mul) ? '*' : '/';
            child(n->b, level(n->b) <= 2);
            break;
        case Kind::Pow:
            child(n->a, level(n->a) <= 4);
            out += '^';
            child(n->b, level(n->b) < 3);
            break;
    }
}

NodePtr derive(const NodePtr& n, int idx) {
    switch (n->kind) {
        case Kind::Num: return num(0.0);
        case Kind::Var: return num(n->var == idx ? 1.0 : 0.0);
        case Kind::Neg: return mk_neg(derive(n->a, idx));
        case Kind::Add: return mk_add(derive(n->a, idx), derive(n->b, idx));
        case Kind::Sub: return mk_sub(derive(n->a, idx), derive(n->b, idx));
        case Kind::Mul:
            return mk_add(mk_mul(derive(n->a, idx), n->b),
                          mk_mul(n->a, derive(n->b, idx)));
        case Kind::Div:
            return mk_div(mk_sub(mk_mul(derive(n->a, idx), n->b),
                                 mk_mul(n->a, derive(n->b, idx))),
                          mk_pow(n->b, num(2.0)));
        case Kind::Pow: {
            if (n->b->kind == Kind::Num) {
                const double c = n->b->value;
                return mk_mul(mk_mul(num(c), mk_pow(n->a, num(c - 1.0))),
                              derive(n->a, idx));
            }
            // u^v = exp(v log u)
            NodePtr du = derive(n->a, idx);
            NodePtr dv = derive(n->b, idx);
            NodePtr term = mk_add(mk_mul(dv, mk_fun(Fn::Log, n->a)),
                                  mk_div(mk_mul(n->b, du), n->a));
            return mk_mul(node(Kind::Pow, n->a, n->b), std::move(term));
        }
        case Kind::Fun: {
            NodePtr du = derive(n->a, idx);
            switch (n->fn) {
                case Fn::Sin: return mk_mul(mk_fun(Fn::Cos, n->a), du);
                case Fn::Cos: return mk_neg(mk_mul(mk_fun(Fn::Sin, n->a), du));
                case Fn::Tan:
                    return mk_div(du, mk_pow(mk_fun(Fn::Cos, n->a), num(2.0)));
                case Fn::Tanh:
                    return mk_mul(mk_pow(mk_fun(Fn::Sech, n->a), num(2.0)), du);
                case Fn::Sech:
                    return mk_neg(mk_mul(
                        mk_mul(mk_fun(Fn::Sech, n->a), mk_fun(Fn::Tanh, n->a)), du));
                case Fn::Exp: return mk_mul(mk_fun(Fn::Exp, n->a), du);
                case Fn::Log: return mk_div(du, n->a);
                case Fn::Sqrt:
                    return mk_div(du, mk_mul(num(2.0), mk_fun(Fn::Sqrt, n->a)));
                case Fn::Abs: throw NonDifferentiable("abs");
            }
            throw NonDifferentiable("fn");
        }
    }
    throw NonDifferentiable("node");
}

NodePtr remap_node(const NodePtr& n, const std::vector<int>& index_map) {
    if (!n) return nullptr;
    if (n->kind == Kind::Var) return var(index_map[static_cast<std::size_t>(n->var)]);
    if (n->kind == Kind::Num) return n;
    auto m = std::make_shared<Expr::Node>(*n);
    m->a = remap_node(n->a, index_map);
    m->b = remap_node(n->b, index_map);
    return m;
}

} // namespace

Expr Expr::parse(std::string_view source, std::vector<std::string> variables) {
    if (variables.size() > 3)
        throw SceneIllFormed("expressions support at most 3 variables");
    Parser p(source, variables);
    NodePtr root = p.run();  // must finish before `variables` is moved from
    return Expr(std::move(root), std::move(variables));
}

Expr Expr::constant(double c, std::vector<std::string> variables) {
    return Expr(num(c), std::move(variables));
}

double Expr::eval(std::span<const double> values) const {
    return eval_node(root_, values);
}

double Expr::eval(const std::map<std::string, double>& bindings) const {
    std::array<double, 3> v{};
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = bindings.find(vars_[i]);
        if (it == bindings.end()) throw UnknownVariable(vars_[i]);
        v[i] = it->second;
    }
    return eval_node(root_, std::span<const double>(v.data(), vars_.size()));
}

Expr Expr::derivative(const std::string& var_name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == var_name) return derivative(static_cast<int>(i));
    throw UnknownVariable(var_name);
}

Expr Expr::derivative(int var_index) const {
    return Expr(derive(root_, var_index), vars_);
}

std::string Expr::print() const {
    std::string out;
    print_node(root_, vars_, out);
    return out;
}

Expr Expr::remap(std::vector<std::string> new_vars,
                 const std::vector<int>& index_map) const {
    return Expr(remap_node(root_, index_map), std::move(new_vars));
}

Expr operator+(const Expr& a, const Expr& b) {
    return Expr(mk_add(a.root(), b.root()), a.variables());
}
Expr operator-(const Expr& a, const Expr& b) {
    return Expr(mk_sub(a.root(), b.root()), a.variables());
}
Expr operator*(const Expr& a, const Expr& b) {
    return Expr(mk_mul(a.root(), b.root()), a.variables());
}
Expr operator/(const Expr& a, const Expr& b) {
    return Expr(mk_div(a.root(), b.root()), a.variables());
}
Expr operator*(double c, const Expr& e) {
    return Expr(mk_mul(num(c), e.root()), e.variables());
}
Expr operator-(const Expr& e) { return Expr(mk_neg(e.root()), e.variables()); }
Expr apply_fn(Expr::Fn f, const Expr& e) {
    return Expr(mk_fun(f, e.root()), e.variables());
}

bool structurally_equal(const Expr::NodePtr& a, const Expr::NodePtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Num: return a->value == b->value;
        case Expr::Kind::Var: return a->var == b->var;
        case Expr::Kind::Fun:
            if (a->fn != b->fn) return false;
            [[fallthrough]];
        default:
            return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
    }
}

} // namespace headwave
