#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "hcf/mathkit.hpp"

using namespace hcf::math;

namespace {

// ln n! by direct summation, long double accumulator.
double log_factorial(long n)
{
    long double s = 0.0L;
    for (long k = 2; k <= n; ++k) {
        s += std::log(static_cast<long double>(k));
    }
    return static_cast<double>(s);
}

// Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
double log_gamma_half_integer(long n)
{
    return log_factorial(2 * n) + 0.5 * std::log(std::numbers::pi) - n * std::log(4.0) - log_factorial(n);
}

} // namespace

TEST_CASE("ln_gamma examples")
{
    CHECK(ln_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ln_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-13));
    CHECK(ln_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-13));
    CHECK(ln_gamma(0.5) == doctest::Approx(0.5723649).epsilon(1e-7));
    CHECK(ln_gamma(10.0) == doctest::Approx(12.8018275).epsilon(1e-8));
}

TEST_CASE("ln_gamma matches factorial and half-integer grids to 1e-12")
{
    for (long n : {1L, 2L, 3L, 5L, 12L, 30L, 100L, 1000L, 50000L, 1000000L}) {
        const double expected = log_factorial(n - 1);
        const double got = ln_gamma(static_cast<double>(n));
        if (expected != 0.0) {
            CHECK(std::abs(got - expected) / std::abs(expected) <= 1e-12);
        } else {
            CHECK(std::abs(got) <= 1e-15);
        }
    }
    for (long n : {0L, 1L, 2L, 7L, 40L, 300L, 20000L}) {
        const double expected = log_gamma_half_integer(n);
        CHECK(std::abs(ln_gamma(n + 0.5) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("ln_gamma rejects non-positive arguments")
{
    CHECK_THROWS_AS(ln_gamma(0.0), DomainError);
    CHECK_THROWS_AS(ln_gamma(-1.5), DomainError);
    CHECK_THROWS_AS(ln_gamma(std::nan("")), DomainError);
}

TEST_CASE("gamma_ratio_half examples")
{
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    CHECK(gamma_ratio_half(1.0) == doctest::Approx(sqrt_pi / 2.0).epsilon(1e-13));
    CHECK(gamma_ratio_half(2.0) == doctest::Approx(3.0 * sqrt_pi / 4.0).epsilon(1e-13));
    // Gamma(4.5) tabulated as 11.631728396567448...
    CHECK(gamma_ratio_half(4.0) == doctest::Approx(11.631728396567448 / 6.0).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_ratio_half(0.0), DomainError);
    CHECK_THROWS_AS(gamma_ratio_half(-2.0), DomainError);
}

TEST_CASE("gamma_ratio_half(n) * gamma_ratio_half(n + 1/2) == n")
{
    for (double n = 0.05; n < 200.0; n *= 1.37) {
        CHECK(gamma_ratio_half(n) * gamma_ratio_half(n + 0.5) == doctest::Approx(n).epsilon(1e-12));
    }
}

TEST_CASE("rising_factorial")
{
    CHECK(rising_factorial(4.0, 3.0) == doctest::Approx(4.0 * 5.0 * 6.0).epsilon(1e-13));
    CHECK(rising_factorial(2.5, 0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(rising_factorial(-1.0, 1.0), DomainError);
}

TEST_CASE("complete_bell examples")
{
    const std::vector<double> a{2.0, 3.0};
    CHECK(complete_bell(a)[2] == doctest::Approx(7.0));
    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(complete_bell(ones)[3] == 5.0);
    const std::vector<double> single{-4.2};
    CHECK(complete_bell(single)[1] == -4.2);
    const BellTable empty = complete_bell({});
    REQUIRE(empty.values.size() == 1);
    CHECK(empty[0] == 1.0);
}

TEST_CASE("complete_bell of ones gives the Bell numbers exactly")
{
    const std::vector<double> ones(6, 1.0);
    const BellTable t = complete_bell(ones);
    const std::vector<double> bell{1, 1, 2, 5, 15, 52, 203};
    REQUIRE(t.values.size() == bell.size());
    REQUIRE(t.max_order() == 6);
    for (std::size_t i = 0; i < bell.size(); ++i) {
        CHECK(t[i] == bell[i]);
    }
}

TEST_CASE("complete_bell reproduces derivatives of exp(c s)")
{
    for (const double c : {0.3, 1.0, 2.7}) {
        std::vector<double> x(12, 0.0);
        x[0] = c;
        const BellTable t = complete_bell(x);
        for (std::size_t n = 0; n <= 12; ++n) {
            CHECK(t[n] == doctest::Approx(std::pow(c, static_cast<double>(n))).epsilon(1e-10));
        }
    }
}

TEST_CASE("complete_bell matches the closed forms for low orders")
{
    const std::vector<double> x{0.7, -1.3, 2.2, 0.4};
    const BellTable t = complete_bell(x);
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    CHECK(t[3] == doctest::Approx(x1 * x1 * x1 + 3 * x1 * x2 + x3).epsilon(1e-14));
    CHECK(t[4] == doctest::Approx(std::pow(x1, 4) + 6 * x1 * x1 * x2 + 4 * x1 * x3 + 3 * x2 * x2 + x4)
                      .epsilon(1e-14));
}

TEST_CASE("log_bell_over_factorial agrees with complete_bell on positive inputs")
{
    const std::vector<double> x{0.5, 1.5, 0.25, 3.0, 0.1, 2.0, 0.7, 1.1};
    std::vector<double> log_x;
    for (const double v : x) {
        log_x.push_back(std::log(v));
    }
    const BellTable t = complete_bell(x);
    const std::vector<double> lb = log_bell_over_factorial(log_x);
    REQUIRE(lb.size() == x.size() + 1);
    for (std::size_t n = 0; n <= x.size(); ++n) {
        CHECK(lb[n] == doctest::Approx(std::log(t[n]) - std::lgamma(n + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("log_bell_over_factorial stays finite where B_n overflows")
{
    // Only x_1 = c: B_n = c^n, so ln(B_n / n!) = n ln c - ln n!.
    const int n = 300;
    std::vector<double> log_x(n, -std::numeric_limits<double>::infinity());
    log_x[0] = std::log(1e4);
    const std::vector<double> lb = log_bell_over_factorial(log_x);
    for (int k : {1, 50, 150, 300}) {
        const double expected = k * std::log(1e4) - log_factorial(k);
        CHECK(lb[static_cast<std::size_t>(k)] == doctest::Approx(expected).epsilon(1e-12));
    }
    // All zeros: B_0 = 1, every higher entry vanishes.
    const std::vector<double> zeros(4, -std::numeric_limits<double>::infinity());
    const std::vector<double> z = log_bell_over_factorial(zeros);
    CHECK(z[0] == 0.0);
    CHECK(std::isinf(z[3]));
    CHECK_THROWS_AS(log_bell_over_factorial(std::vector<double>{std::nan("")}), DomainError);
}

TEST_CASE("integrate examples")
{
    CHECK(integrate([](double r) { return r; }, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(integrate([](double r) { return 1.0 / r; }, 1.0, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-10));
    const double lambda = 4e-5;
    auto pdf = [&](double r) { return 2.0 * std::numbers::pi * lambda * r * std::exp(-lambda * std::numbers::pi * r * r); };
    CHECK(integrate(pdf, 0.0, 500.0) == doctest::Approx(-std::expm1(-lambda * std::numbers::pi * 250000.0)).epsilon(1e-9));
}

TEST_CASE("integrate meets the relative tolerance on peaked and oscillating integrands")
{
    CHECK(integrate([](double x) { return std::exp(-1e4 * (x - 0.3) * (x - 0.3)); }, 0.0, 1.0) ==
          doctest::Approx(std::sqrt(std::numbers::pi / 1e4)).epsilon(1e-8));
    CHECK(integrate([](double x) { return std::sin(50.0 * x); }, 0.0, 1.0) ==
          doctest::Approx((1.0 - std::cos(50.0)) / 50.0).epsilon(1e-8));
    CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("integrate is linear")
{
    auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
    auto g = [](double x) { return 1.0 / (1.0 + x * x); };
    const double a = 2.5, b = -0.75, tol = 1e-8;
    const double lhs = integrate([&](double x) { return a * f(x) + b * g(x); }, 0.0, 4.0, tol);
    const double rhs = a * integrate(f, 0.0, 4.0, tol) + b * integrate(g, 0.0, 4.0, tol);
    CHECK(std::abs(lhs - rhs) <= 2.0 * tol * std::abs(rhs));
}

TEST_CASE("integrate errors")
{
    CHECK(integrate([](double x) { return x; }, 1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(integrate([](double x) { return x; }, 2.0, 1.0), DomainError);
    QuadratureOptions tight;
    tight.rel_tol = 1e-12;
    tight.max_intervals = 8;
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, tight), NonConvergence);
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0), NonConvergence);
    CHECK_THROWS_AS(integrate([](double x) { return std::log(x - 0.5); }, 0.0, 1.0), DomainError);
}

TEST_CASE("finite_difference examples")
{
    CHECK(finite_difference([](double s) { return s * s; }, 1.0, 2, 1e-3) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(finite_difference([](double s) { return std::exp(-s); }, 1.0, 1, 1e-3) ==
          doctest::Approx(-std::exp(-1.0)).epsilon(1e-8));
    CHECK(std::abs(finite_difference([](double s) { return std::exp(-2.0 * s); }, 0.0, 3, 1e-2) + 8.0) <= 1e-4);
    CHECK_THROWS_AS(finite_difference([](double s) { return s; }, 0.0, 0, 1e-3), DomainError);
    CHECK_THROWS_AS(finite_difference([](double s) { return s; }, 0.0, 1, 0.0), DomainError);
}

TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1 exactly")
{
    for (int n : {1, 2, 5, 10, 16}) {
        const GaussRule rule = gauss_legendre(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double sum = 0.0;
            for (int k = 0; k < n; ++k) {
                sum += rule.weights[k] * std::pow(rule.nodes[k], deg);
            }
            const double exact = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
            CHECK(sum == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
    CHECK_THROWS_AS(gauss_legendre(0), DomainError);
}
