#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "headwave/quadrature.hpp"

using headwave::QuadOptions;
using headwave::integrate;

TEST_CASE("polynomials are exact") {
    auto f = [](double x) { return x * x; };
    CHECK(integrate(f, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    auto g = [](double x) { return 3 * x * x * x * x * x - x; };
    CHECK(integrate(g, -1.0, 2.0) == doctest::Approx(30.0).epsilon(1e-13));
}

TEST_CASE("gaussian integral") {
    auto f = [](double x) { return std::exp(-x * x); };
    const double ref = std::sqrt(M_PI) * std::erf(6.0);
    CHECK(integrate(f, -6.0, 6.0) == doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("oscillatory integrand") {
    auto f = [](double x) { return std::sin(x); };
    CHECK(integrate(f, 0.0, 50.0) ==
          doctest::Approx(1.0 - std::cos(50.0)).epsilon(1e-11));
}

TEST_CASE("near-singular integrand meets requested tolerance") {
    auto f = [](double x) { return 1.0 / std::sqrt(x + 1e-6); };
    const double ref = 2.0 * (std::sqrt(1.0 + 1e-6) - std::sqrt(1e-6));
    CHECK(std::abs(integrate(f, 0.0, 1.0) - ref) < 1e-8);
}

TEST_CASE("empty and reversed intervals integrate to zero") {
    auto f = [](double) { return 1.0; };
    CHECK(integrate(f, 1.0, 1.0) == 0.0);
    CHECK(integrate(f, 2.0, 1.0) == 0.0);
}

TEST_CASE("interval budget exhaustion throws") {
    QuadOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 0.0;
    opt.max_intervals = 4;
    auto f = [](double x) { return std::sin(100.0 * x) / (1e-4 + x * x); };
    CHECK_THROWS_AS(integrate(f, 0.0, 10.0, opt),
                    headwave::QuadratureNonConvergence);
}

TEST_CASE("non-finite integrand throws") {
    auto f = [](double x) { return 1.0 / x; };  // non-integrable at 0
    CHECK_THROWS_AS(integrate(f, 0.0, 1.0), headwave::QuadratureNonConvergence);
}
