#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace hcf::math {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Gamma(n + 1/2) / Gamma(n).
double gamma_ratio_half(double n);

/// Gamma(x + a) / Gamma(x), i.e. the rising factorial x^(a) for real a.
double rising_factorial(double x, double a);

/// Complete exponential Bell polynomials B_0..B_n of x_1..x_n.
/// values[0] == 1; values[i] depends on x_1..x_i only.
struct BellTable {
    std::vector<double> values;

    [[nodiscard]] std::size_t max_order() const { return values.size() - 1; }
    double operator[](std::size_t i) const { return values[i]; }
};

BellTable complete_bell(std::span<const double> x);

/// ln(B_n / n!) for n = 0..N, given ln x_1..ln x_N (use -inf for x_i == 0).
///
/// Restricted to non-negative x, where every term of the recurrence is
/// non-negative and nothing cancels. Each order is accumulated with
/// log-sum-exp, so B_n may lie far outside the double range. Entries with
/// B_n == 0 come back as -inf.
std::vector<double> log_bell_over_factorial(std::span<const double> log_x);

using RealFn = std::function<double(double)>;

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    int max_depth = 60;
    int max_intervals = 4000;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b].
/// Throws NonConvergence when the interval budget or the depth cap is hit
/// before the error estimate drops below max(rel_tol * |I|, abs_tol).
double integrate(const RealFn& f, double a, double b, const QuadratureOptions& opts);
double integrate(const RealFn& f, double a, double b, double rel_tol = 1e-8);

/// Central finite-difference estimate of the order-th derivative of f at s.
double finite_difference(const RealFn& f, double s, int order, double step);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

} // namespace hcf::math
