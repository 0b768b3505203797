#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hcf/coverage_curve.hpp"
#include "hcf/params.hpp"

namespace hcf::analytic {

class DegenerateMoments : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class OrderCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct S0Moments {
    double m1 = 0.0; ///< E[S_0]
    double m2 = 0.0; ///< E[S_0^2]
};

/// Gamma(k, theta) with the same first two raw moments as S_0.
struct MomentMatch {
    double k = 0.0;
    double theta = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

/// Raw moments of S_0 = (sqrt(rho_b) ||h_00|| + L_A)^2 with ||h_00||^2 ~ Gamma(N_B, beta_00).
S0Moments s0_moments(const NetworkConfig& cfg, const DerivedParams& derived, double d00);

MomentMatch moment_match(double m1, double m2);

/// Everything the Laplace/derivative machinery needs at one (T, d00).
struct ConditionalPoint {
    double threshold = 0.0; ///< linear SINR threshold T
    double d00 = 0.0;
    double theta = 0.0;     ///< Gamma scale of S_0
    double i_e = 0.0;       ///< I_A_bar + noise
};

double laplace_intra(double s, const ConditionalPoint& pt, const NetworkConfig& cfg,
                     const DerivedParams& derived);
double laplace_inter(double s, const ConditionalPoint& pt, const NetworkConfig& cfg,
                     const DerivedParams& derived);

/// ln L(s) = D1(s) + D2(s) + D3(s); D3 by adaptive quadrature.
double log_laplace(double s, const ConditionalPoint& pt, const NetworkConfig& cfg,
                   const DerivedParams& derived);

/// L(s) as the product e^{-s T I_e / theta} * L_IB0(s) * L_IB(s).
double laplace_product(double s, const ConditionalPoint& pt, const NetworkConfig& cfg,
                       const DerivedParams& derived);

/// d^i g / ds^i at s for i = 1..order (entry i-1), with g = ln L. The D3 radial
/// integrals share one Gauss-Legendre grid across orders.
std::vector<double> g_derivatives(int order, double s, const ConditionalPoint& pt, const NetworkConfig& cfg,
                                  const DerivedParams& derived);

/// Same as g_derivatives at s = 1 but with every D3 integral evaluated
/// separately by adaptive quadrature. Slow; kept as a cross-check.
std::vector<double> g_derivatives_adaptive(int order, double s, const ConditionalPoint& pt,
                                           const NetworkConfig& cfg, const DerivedParams& derived);

struct DerivativeStack {
    int order = 0;
    std::vector<double> g_derivs; ///< entry i-1 = g^(i)(1), i = 1..order
    std::vector<double> l_derivs; ///< entry i = L^(i)(1), i = 0..order
};

/// L^(i)(1) = L(1) * B_i(g'(1), ..., g^(i)(1)).
DerivativeStack derivative_stack(int order, const ConditionalPoint& pt, const NetworkConfig& cfg,
                                 const DerivedParams& derived);

struct AnalyticOptions {
    int max_order = 128;
    double outer_rel_tol = 1e-6;
    double outer_abs_tol = 1e-9;
    /// Relative variance below which S_0 is treated as deterministic.
    double degenerate_rel_var = 1e-12;
};

struct AnalyticStats {
    std::size_t evaluations = 0;
    std::size_t clamped = 0;
    std::size_t degenerate = 0;
};

/// sum_{i<n} (-1)^i / i! L^(i)(1) for n = 1..max_n (entry n-1). All terms are
/// non-negative, so the partial sums are accumulated without cancellation.
std::vector<double> integer_shape_coverage(int max_n, const ConditionalPoint& pt, const NetworkConfig& cfg,
                                           const DerivedParams& derived);

/// Coverage at a fixed serving distance. Non-integer shapes are handled by
/// linear weighting between floor(k) and ceil(k); shapes below 1 use the
/// single-term series.
double conditional_coverage(double threshold, double d00, const NetworkConfig& cfg,
                            const DerivedParams& derived, const AnalyticOptions& opts = {},
                            AnalyticStats* stats = nullptr);

/// Average over the serving distance on (min_distance, R].
double coverage(double threshold, const NetworkConfig& cfg, const DerivedParams& derived,
                const AnalyticOptions& opts = {}, AnalyticStats* stats = nullptr);

CoverageCurve coverage_curve(const std::vector<double>& thresholds_db, const NetworkConfig& cfg,
                             const DerivedParams& derived, std::string label,
                             const AnalyticOptions& opts = {}, AnalyticStats* stats = nullptr);

} // namespace hcf::analytic
