#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "headwave/errors.hpp"

namespace headwave {

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_intervals = 1 << 15;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1,1].
// Column 0: abscissa, column 1: Gauss weight, column 2: Kronrod weight.
inline constexpr double kG7K15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0,               0.204432940075298},
    {0.586087235467691, 0.0,               0.169004726639267},
    {0.864864423359769, 0.0,               0.104790010322250},
    {0.991455371120813, 0.0,               0.022935322010529},
};

template <class F>
void gauss_kronrod_panel(const F& f, double a, double b, double& k15, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double y0 = f(mid);
    double g7 = kG7K15[0][1] * y0;
    k15 = kG7K15[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kG7K15[i][0];
        const double yi = f(mid + dx) + f(mid - dx);
        g7 += kG7K15[i][1] * yi;
        k15 += kG7K15[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;
    err = std::abs(k15 - g7);
}

} // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a,b] by interval bisection.
// Accepts an interval when the local error estimate drops below its share of
// the absolute tolerance or below rel_tol times the local value.
template <class F>
double integrate(const F& f, double a, double b, const QuadOptions& opt = {}) {
    if (!(b > a)) return 0.0;
    struct Interval { double a, b, value, err, tol; };
    int used = 1;
    double total = 0.0;

    // Explicit stack; worst intervals are split first within each branch.
    std::vector<Interval> stack;
    stack.reserve(64);
    double v0, e0;
    detail::gauss_kronrod_panel(f, a, b, v0, e0);
    stack.push_back({a, b, v0, e0, opt.abs_tol});
    while (!stack.empty()) {
        Interval iv = stack.back();
        stack.pop_back();
        if (iv.err <= iv.tol || iv.err <= opt.rel_tol * std::abs(iv.value)) {
            total += iv.value;
            continue;
        }
        if (used >= opt.max_intervals)
            throw QuadratureNonConvergence("interval budget exhausted");
        const double mid = 0.5 * (iv.a + iv.b);
        double vl, el, vr, er;
        detail::gauss_kronrod_panel(f, iv.a, mid, vl, el);
        detail::gauss_kronrod_panel(f, mid, iv.b, vr, er);
        used += 1;
        stack.push_back({iv.a, mid, vl, el, 0.5 * iv.tol});
        stack.push_back({mid, iv.b, vr, er, 0.5 * iv.tol});
    }
    if (!std::isfinite(total))
        throw QuadratureNonConvergence("non-finite integrand");
    return total;
}

} // namespace headwave
