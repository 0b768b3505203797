#include "hcf/mathkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace hcf::math {

double ln_gamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("ln_gamma: argument must be positive and finite, got " + std::to_string(x));
    }
    // boost's lgamma does not touch the global signgam, unlike ::lgamma.
    return boost::math::lgamma(x);
}

double rising_factorial(double x, double a)
{
    if (!(x > 0.0) || !(x + a > 0.0)) {
        throw DomainError("rising_factorial: x and x + a must be positive");
    }
    if (a == 0.0) {
        return 1.0;
    }
    return std::exp(ln_gamma(x + a) - ln_gamma(x));
}

double gamma_ratio_half(double n)
{
    if (!(n > 0.0)) {
        throw DomainError("gamma_ratio_half: n must be positive, got " + std::to_string(n));
    }
    return std::exp(ln_gamma(n + 0.5) - ln_gamma(n));
}

BellTable complete_bell(std::span<const double> x)
{
    const std::size_t n = x.size();
    BellTable table;
    table.values.assign(n + 1, 0.0);
    table.values[0] = 1.0;

    // Pascal row C(m, 0..m), extended in place each step.
    std::vector<double> binom{1.0};
    binom.reserve(n + 1);
    for (std::size_t m = 0; m < n; ++m) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= m; ++k) {
            acc += binom[k] * table.values[m - k] * x[k];
        }
        table.values[m + 1] = acc;

        binom.push_back(1.0);
        for (std::size_t k = m; k >= 1; --k) {
            binom[k] += binom[k - 1];
        }
    }
    return table;
}

std::vector<double> log_bell_over_factorial(std::span<const double> log_x)
{
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    const std::size_t n = log_x.size();

    // w_j = x_j / (j-1)! so that b_m = B_m / m! obeys b_m = (1/m) sum_j w_j b_{m-j}.
    std::vector<double> log_w(n);
    for (std::size_t j = 1; j <= n; ++j) {
        const double lx = log_x[j - 1];
        if (std::isnan(lx) || lx == std::numeric_limits<double>::infinity()) {
            throw DomainError("log_bell_over_factorial: inputs must be finite or -inf");
        }
        log_w[j - 1] = lx == neg_inf ? neg_inf : lx - ln_gamma(static_cast<double>(j));
    }

    std::vector<double> out(n + 1, neg_inf);
    out[0] = 0.0;
    std::vector<double> terms(n);
    for (std::size_t m = 1; m <= n; ++m) {
        double peak = neg_inf;
        for (std::size_t j = 1; j <= m; ++j) {
            terms[j - 1] = log_w[j - 1] + out[m - j];
            peak = std::max(peak, terms[j - 1]);
        }
        if (peak == neg_inf) {
            continue;
        }
        double acc = 0.0;
        for (std::size_t j = 1; j <= m; ++j) {
            acc += std::exp(terms[j - 1] - peak);
        }
        out[m] = peak + std::log(acc / static_cast<double>(m));
    }
    return out;
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr double gk_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    int depth;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const RealFn& f, double a, double b, int depth)
{
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = gk_wk[7] * fc;
    double gauss = gk_wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * gk_x[i];
        const double sum = f(centre - dx) + f(centre + dx);
        kronrod += gk_wk[i] * sum;
        if (i % 2 == 1) {
            gauss += gk_wg[i / 2] * sum;
        }
    }
    kronrod *= half;
    gauss *= half;
    if (!std::isfinite(kronrod)) {
        throw DomainError("integrate: integrand is not finite on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
    }
    return Panel{a, b, kronrod, std::abs(kronrod - gauss), depth};
}

} // namespace

double integrate(const RealFn& f, double a, double b, const QuadratureOptions& opts)
{
    if (!(a < b)) {
        if (a == b) {
            return 0.0;
        }
        throw DomainError("integrate: requires a < b");
    }

    std::priority_queue<Panel> panels;
    Panel first = gk15(f, a, b, 0);
    double total = first.value;
    double total_err = first.error;
    panels.push(first);

    int count = 1;
    while (total_err > std::max(opts.rel_tol * std::abs(total), opts.abs_tol)) {
        Panel worst = panels.top();
        if (worst.depth >= opts.max_depth || count >= opts.max_intervals) {
            throw NonConvergence("integrate: refinement budget exhausted on [" + std::to_string(a) +
                                 ", " + std::to_string(b) + "], error estimate " +
                                 std::to_string(total_err));
        }
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gk15(f, worst.a, mid, worst.depth + 1);
        Panel right = gk15(f, mid, worst.b, worst.depth + 1);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;

        // The running sums drift; re-accumulate now and then.
        if (count % 64 == 0) {
            auto copy = panels;
            total = 0.0;
            total_err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                copy.pop();
            }
        }
    }
    return total;
}

double integrate(const RealFn& f, double a, double b, double rel_tol)
{
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    return integrate(f, a, b, opts);
}

namespace {

double central_difference(const RealFn& f, double s, int order, double h)
{
    // sum_k (-1)^k C(n,k) f(s + (n/2 - k) h) / h^n
    double binom = 1.0;
    double acc = 0.0;
    for (int k = 0; k <= order; ++k) {
        const double offset = 0.5 * order - k;
        const double term = binom * f(s + offset * h);
        acc += (k % 2 == 0) ? term : -term;
        binom = binom * (order - k) / (k + 1);
    }
    return acc / std::pow(h, order);
}

} // namespace

double finite_difference(const RealFn& f, double s, int order, double step)
{
    if (order < 1) {
        throw DomainError("finite_difference: order must be >= 1");
    }
    if (!(step > 0.0)) {
        throw DomainError("finite_difference: step must be positive");
    }
    // One Richardson step lifts the O(h^2) stencil to O(h^4).
    const double coarse = central_difference(f, s, order, step);
    const double fine = central_difference(f, s, order, 0.5 * step);
    return (4.0 * fine - coarse) / 3.0;
}

GaussRule gauss_legendre(int n)
{
    if (n < 1) {
        throw DomainError("gauss_legendre: n must be >= 1");
    }
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

} // namespace hcf::math
