#include "hcf/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hcf/geometry.hpp"
#include "hcf/mathkit.hpp"
#include "hcf/simd/kernels.hpp"

namespace hcf::analytic {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b)
{
    if (a == neg_inf) {
        return b;
    }
    if (b == neg_inf) {
        return a;
    }
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

/// T rho_b beta0 / theta.
double scaled_threshold(const ConditionalPoint& pt, const NetworkConfig& cfg, const DerivedParams& derived)
{
    return pt.threshold * derived.rho_b * cfg.beta0 / pt.theta;
}

double edge_radius(const NetworkConfig& cfg)
{
    return std::sqrt(cfg.area() / std::numbers::pi);
}

/// D3(s) = 2 pi lambda_b int_{d00}^{R} [(1 + s T_theta r^-a)^-phi - 1] r dr,
/// integrated in x = ln r.
double inter_cell_exponent(double s, const ConditionalPoint& pt, const NetworkConfig& cfg,
                           const DerivedParams& derived)
{
    const double r_edge = edge_radius(cfg);
    if (!(pt.d00 < r_edge) || s == 0.0) {
        return 0.0;
    }
    const double t_theta = scaled_threshold(pt, cfg, derived);
    if (t_theta == 0.0) {
        return 0.0;
    }
    const double phi = derived.phi_bar_b;
    const double alpha = cfg.alpha1;
    auto integrand = [&](double x) {
        const double r = std::exp(x);
        const double t = s * t_theta * std::exp(-alpha * x);
        return std::expm1(-phi * std::log1p(t)) * r * r;
    };
    math::QuadratureOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-14;
    const double integral = math::integrate(integrand, std::log(pt.d00), std::log(r_edge), opts);
    return 2.0 * std::numbers::pi * cfg.lambda_b * integral;
}

struct RadialGrid {
    std::vector<double> r;
    std::vector<double> weight; ///< includes the r dr = r^2 dx Jacobian
};

/// Composite Gauss-Legendre grid on [ln d00, ln R]. Panels start narrow at d00,
/// where high-order integrands concentrate, and widen geometrically.
RadialGrid radial_grid(double d00, double r_edge, double alpha, int order)
{
    static const math::GaussRule rule = math::gauss_legendre(10);
    RadialGrid grid;
    const double x0 = std::log(d00);
    const double x1 = std::log(r_edge);
    double width = std::min(0.25, 1.0 / (alpha * std::max(order, 1)));
    for (double a = x0; a < x1;) {
        const double b = std::min(a + width, x1);
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double r = std::exp(mid + half * rule.nodes[k]);
            grid.r.push_back(r);
            grid.weight.push_back(half * rule.weights[k] * r * r);
        }
        a = b;
        width = std::min(0.25, width * 1.4);
    }
    return grid;
}

/// ln of (-1)^i d^i D3/ds^i for i = 1..order (entry i-1). Each is non-negative.
std::vector<double> log_inter_cell_derivatives(int order, double s, const ConditionalPoint& pt,
                                               const NetworkConfig& cfg, const DerivedParams& derived)
{
    std::vector<double> out(static_cast<std::size_t>(order), neg_inf);
    const double r_edge = edge_radius(cfg);
    const double t_theta = scaled_threshold(pt, cfg, derived);
    if (!(pt.d00 < r_edge) || t_theta == 0.0 || order < 1) {
        return out;
    }
    const double phi = derived.phi_bar_b;
    const RadialGrid grid = radial_grid(pt.d00, r_edge, cfg.alpha1, order);

    // integrand_i(r) = (1 + t s)^-phi * (t / (1 + t s))^i * r
    const std::size_t n = grid.r.size();
    std::vector<double> coef(n);
    std::vector<double> ratio(n);
    double ratio_max = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = t_theta * std::pow(grid.r[k], -cfg.alpha1);
        const double denom = 1.0 + t * s;
        coef[k] = grid.weight[k] * std::exp(-phi * std::log1p(t * s));
        ratio[k] = t / denom;
        ratio_max = std::max(ratio_max, ratio[k]);
    }
    if (!(ratio_max > 0.0)) {
        return out;
    }
    for (double& u : ratio) {
        u /= ratio_max;
    }
    std::vector<double> sums(static_cast<std::size_t>(order) + 1);
    simd::active_kernels().power_sums(coef, ratio, sums);

    const double log_prefactor = std::log(2.0 * std::numbers::pi * cfg.lambda_b) - math::ln_gamma(phi);
    const double log_ratio_max = std::log(ratio_max);
    for (int i = 1; i <= order; ++i) {
        const double sum = sums[static_cast<std::size_t>(i)];
        if (sum > 0.0) {
            out[static_cast<std::size_t>(i - 1)] =
                log_prefactor + math::ln_gamma(phi + i) + i * log_ratio_max + std::log(sum);
        }
    }
    return out;
}

/// ln of (-1)^i g^(i)(s), i = 1..order. Every component is non-negative for s >= 0.
std::vector<double> log_signed_g_derivatives(int order, double s, const ConditionalPoint& pt,
                                             const NetworkConfig& cfg, const DerivedParams& derived)
{
    std::vector<double> out = log_inter_cell_derivatives(order, s, pt, cfg, derived);
    if (order < 1) {
        return out;
    }
    const double noise_term = pt.threshold * pt.i_e / pt.theta;
    if (noise_term > 0.0) {
        out[0] = log_add(out[0], std::log(noise_term));
    }
    const double phi = derived.phi_bar_b;
    const double a = scaled_threshold(pt, cfg, derived) * std::pow(pt.d00, -cfg.alpha1);
    if (phi > 1.0 && a > 0.0) {
        const double log_base = std::log(a / (1.0 + a * s));
        const double log_weight = std::log(phi - 1.0);
        for (int i = 1; i <= order; ++i) {
            const double term = log_weight + math::ln_gamma(static_cast<double>(i)) + i * log_base;
            out[static_cast<std::size_t>(i - 1)] = log_add(out[static_cast<std::size_t>(i - 1)], term);
        }
    }
    return out;
}

void check_point(const ConditionalPoint& pt)
{
    if (!(pt.d00 > 0.0)) {
        throw math::DomainError("analytic: d00 must be positive");
    }
    if (!(pt.theta > 0.0)) {
        throw math::DomainError("analytic: theta must be positive");
    }
}

} // namespace

S0Moments s0_moments(const NetworkConfig& cfg, const DerivedParams& derived, double d00)
{
    if (!(d00 > 0.0)) {
        throw math::DomainError("s0_moments: d00 must be positive");
    }
    const double beta = path_loss(d00, cfg.beta0, cfg.alpha1);
    const double rho = derived.rho_b;
    const double la = derived.l_a;
    const double n = cfg.n_b;
    const double half = math::gamma_ratio_half(n);
    const double three_halves = std::exp(math::ln_gamma(n + 1.5) - math::ln_gamma(n));
    const double sr = std::sqrt(rho);
    const double sb = std::sqrt(beta);

    S0Moments m;
    m.m1 = rho * n * beta + 2.0 * sr * la * half * sb + la * la;
    m.m2 = rho * rho * n * (n + 1.0) * beta * beta + 4.0 * rho * sr * la * three_halves * beta * sb +
           6.0 * rho * la * la * n * beta + 4.0 * sr * la * la * la * half * sb + la * la * la * la;
    return m;
}

MomentMatch moment_match(double m1, double m2)
{
    const double var = m2 - m1 * m1;
    if (!(m1 > 0.0) || !(var > 0.0)) {
        throw DegenerateMoments("moment_match: need m2 > m1^2 > 0");
    }
    return MomentMatch{m1 * m1 / var, var / m1, m1, m2};
}

double laplace_intra(double s, const ConditionalPoint& pt, const NetworkConfig& cfg,
                     const DerivedParams& derived)
{
    check_point(pt);
    const double a = scaled_threshold(pt, cfg, derived) * std::pow(pt.d00, -cfg.alpha1);
    return std::exp((1.0 - derived.phi_bar_b) * std::log1p(s * a));
}

double laplace_inter(double s, const ConditionalPoint& pt, const NetworkConfig& cfg,
                     const DerivedParams& derived)
{
    check_point(pt);
    return std::exp(inter_cell_exponent(s, pt, cfg, derived));
}

double log_laplace(double s, const ConditionalPoint& pt, const NetworkConfig& cfg,
                   const DerivedParams& derived)
{
    check_point(pt);
    const double a = scaled_threshold(pt, cfg, derived) * std::pow(pt.d00, -cfg.alpha1);
    const double d1 = -s * pt.threshold * pt.i_e / pt.theta;
    const double d2 = (1.0 - derived.phi_bar_b) * std::log1p(s * a);
    return d1 + d2 + inter_cell_exponent(s, pt, cfg, derived);
}

double laplace_product(double s, const ConditionalPoint& pt, const NetworkConfig& cfg,
                       const DerivedParams& derived)
{
    return std::exp(-s * pt.threshold * pt.i_e / pt.theta) * laplace_intra(s, pt, cfg, derived) *
           laplace_inter(s, pt, cfg, derived);
}

std::vector<double> g_derivatives(int order, double s, const ConditionalPoint& pt, const NetworkConfig& cfg,
                                  const DerivedParams& derived)
{
    check_point(pt);
    if (order < 1) {
        throw math::DomainError("g_derivatives: order must be >= 1");
    }
    const std::vector<double> logs = log_signed_g_derivatives(order, s, pt, cfg, derived);
    std::vector<double> out(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const double mag = std::exp(logs[i]);
        out[i] = (i % 2 == 0) ? -mag : mag; // entry i is order i+1
    }
    return out;
}

std::vector<double> g_derivatives_adaptive(int order, double s, const ConditionalPoint& pt,
                                           const NetworkConfig& cfg, const DerivedParams& derived)
{
    check_point(pt);
    if (order < 1) {
        throw math::DomainError("g_derivatives_adaptive: order must be >= 1");
    }
    const double phi = derived.phi_bar_b;
    const double t_theta = scaled_threshold(pt, cfg, derived);
    const double a = t_theta * std::pow(pt.d00, -cfg.alpha1);
    const double r_edge = edge_radius(cfg);

    std::vector<double> out(static_cast<std::size_t>(order));
    for (int i = 1; i <= order; ++i) {
        double value = (i == 1) ? -pt.threshold * pt.i_e / pt.theta : 0.0;
        // D2
        value += (i % 2 == 1 ? 1.0 : -1.0) * (1.0 - phi) * std::exp(math::ln_gamma(i)) *
                 std::pow(a / (1.0 + a * s), i);
        // D3
        if (pt.d00 < r_edge && t_theta > 0.0) {
            const double rising = std::exp(math::ln_gamma(phi + i) - math::ln_gamma(phi));
            auto integrand = [&](double x) {
                const double r = std::exp(x);
                const double t = t_theta * std::exp(-cfg.alpha1 * x);
                return std::pow(-t, i) * std::pow(1.0 + t * s, -(phi + i)) * r * r;
            };
            math::QuadratureOptions opts;
            opts.rel_tol = 1e-10;
            opts.abs_tol = 1e-300;
            value += 2.0 * std::numbers::pi * cfg.lambda_b * rising *
                     math::integrate(integrand, std::log(pt.d00), std::log(r_edge), opts);
        }
        out[static_cast<std::size_t>(i - 1)] = value;
    }
    return out;
}

DerivativeStack derivative_stack(int order, const ConditionalPoint& pt, const NetworkConfig& cfg,
                                 const DerivedParams& derived)
{
    DerivativeStack stack;
    stack.order = order;
    stack.g_derivs = g_derivatives(order, 1.0, pt, cfg, derived);
    const double l1 = std::exp(log_laplace(1.0, pt, cfg, derived));
    const math::BellTable bell = math::complete_bell(stack.g_derivs);
    stack.l_derivs.resize(bell.values.size());
    for (std::size_t i = 0; i < bell.values.size(); ++i) {
        stack.l_derivs[i] = l1 * bell.values[i];
    }
    return stack;
}

std::vector<double> integer_shape_coverage(int max_n, const ConditionalPoint& pt, const NetworkConfig& cfg,
                                           const DerivedParams& derived)
{
    check_point(pt);
    if (max_n < 1) {
        throw math::DomainError("integer_shape_coverage: need at least one term");
    }
    const double log_l1 = log_laplace(1.0, pt, cfg, derived);
    // (-1)^i B_i(g') = B_i(-g', g'', -g''', ...), so every series term is
    // L(1) * B_i(y) / i! with y_i = (-1)^i g^(i)(1) >= 0.
    const std::vector<double> log_y = log_signed_g_derivatives(max_n - 1, 1.0, pt, cfg, derived);
    const std::vector<double> log_terms = math::log_bell_over_factorial(log_y);

    std::vector<double> partial(static_cast<std::size_t>(max_n));
    double acc = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        const double lt = log_terms[static_cast<std::size_t>(n - 1)];
        if (lt != neg_inf) {
            acc += std::exp(log_l1 + lt);
        }
        partial[static_cast<std::size_t>(n - 1)] = acc;
    }
    return partial;
}

double conditional_coverage(double threshold, double d00, const NetworkConfig& cfg,
                            const DerivedParams& derived, const AnalyticOptions& opts, AnalyticStats* stats)
{
    if (!(threshold > 0.0)) {
        throw math::DomainError("conditional_coverage: threshold must be positive");
    }
    if (stats != nullptr) {
        ++stats->evaluations;
    }
    const S0Moments m = s0_moments(cfg, derived, d00);
    const double i_e = derived.i_a_bar + cfg.noise;
    const double var = m.m2 - m.m1 * m.m1;

    // No BS signal: S_0 collapses to the constant L_A^2 and there is no BS
    // interference, so the CCDF is a step.
    if (derived.rho_b == 0.0 || var <= opts.degenerate_rel_var * m.m1 * m.m1) {
        if (stats != nullptr) {
            ++stats->degenerate;
        }
        return m.m1 > threshold * i_e ? 1.0 : 0.0;
    }

    const MomentMatch mm = moment_match(m.m1, m.m2);
    const double k = mm.k;
    const double lo = std::floor(k);
    const double hi = std::ceil(k);
    if (hi > opts.max_order) {
        throw OrderCapExceeded("conditional_coverage: shape " + std::to_string(k) +
                               " needs more than " + std::to_string(opts.max_order) + " series terms");
    }

    const ConditionalPoint pt{threshold, d00, mm.theta, i_e};
    const int n_hi = static_cast<int>(hi);
    const std::vector<double> p = integer_shape_coverage(n_hi, pt, cfg, derived);
    const double p_hi = p[static_cast<std::size_t>(n_hi - 1)];
    const double p_lo = p[static_cast<std::size_t>(std::max(static_cast<int>(lo), 1) - 1)];

    double result = (lo == hi) ? p_hi : (hi - k) * p_lo + (k - lo) * p_hi;
    if (!(result >= 0.0 && result <= 1.0)) {
        if (stats != nullptr) {
            ++stats->clamped;
        }
        result = std::clamp(std::isnan(result) ? 0.0 : result, 0.0, 1.0);
    }
    return result;
}

double coverage(double threshold, const NetworkConfig& cfg, const DerivedParams& derived,
                const AnalyticOptions& opts, AnalyticStats* stats)
{
    if (!(threshold > 0.0)) {
        throw math::DomainError("coverage: threshold must be positive");
    }
    const double r_edge = edge_radius(cfg);
    if (derived.rho_b == 0.0) {
        // Serving distance is irrelevant without a BS layer.
        return conditional_coverage(threshold, r_edge, cfg, derived, opts, stats);
    }
    auto integrand = [&](double r) {
        return conditional_coverage(threshold, r, cfg, derived, opts, stats) *
               nearest_distance_pdf(r, cfg.lambda_b);
    };
    math::QuadratureOptions q;
    q.rel_tol = opts.outer_rel_tol;
    q.abs_tol = opts.outer_abs_tol;
    const double p = math::integrate(integrand, cfg.min_distance, r_edge, q);
    return std::clamp(p, 0.0, 1.0);
}

CoverageCurve coverage_curve(const std::vector<double>& thresholds_db, const NetworkConfig& cfg,
                             const DerivedParams& derived, std::string label, const AnalyticOptions& opts,
                             AnalyticStats* stats)
{
    CoverageCurve curve;
    curve.label = std::move(label);
    curve.thresholds_db = thresholds_db;
    curve.probabilities.reserve(thresholds_db.size());
    curve.stderrs.assign(thresholds_db.size(), 0.0);
    for (const double t_db : thresholds_db) {
        curve.probabilities.push_back(coverage(db_to_linear(t_db), cfg, derived, opts, stats));
    }
    return curve;
}

} // namespace hcf::analytic
