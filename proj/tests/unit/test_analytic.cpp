#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "hcf/analytic.hpp"
#include "hcf/geometry.hpp"
#include "hcf/mathkit.hpp"
#include "hcf/mc_sim.hpp"
#include "support/stats.hpp"

using namespace hcf;
using namespace hcf::analytic;

namespace {

struct Setup {
    NetworkConfig cfg = reference_config();
    DerivedParams d = derive(cfg);

    ConditionalPoint point(double threshold, double d00) const
    {
        const S0Moments m = s0_moments(cfg, d, d00);
        return {threshold, d00, moment_match(m.m1, m.m2).theta, d.i_a_bar + cfg.noise};
    }
};

// Composite Simpson in r, independent of the library quadrature.
double simpson(const std::function<double(double)>& f, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    }
    return s * h / 3.0;
}

double edge(const NetworkConfig& cfg)
{
    return std::sqrt(cfg.area() / std::numbers::pi);
}

} // namespace

TEST_CASE("s0_moments without APs are Gamma moments")
{
    NetworkConfig cfg = reference_config();
    cfg.p_a = 0.0;
    const DerivedParams d = derive(cfg);
    const double beta = path_loss(100.0, cfg.beta0, cfg.alpha1);
    const S0Moments m = s0_moments(cfg, d, 100.0);
    CHECK(m.m1 == doctest::Approx(d.rho_b * cfg.n_b * beta).epsilon(1e-14));
    CHECK(m.m2 == doctest::Approx(d.rho_b * d.rho_b * cfg.n_b * (cfg.n_b + 1) * beta * beta).epsilon(1e-14));
    CHECK_THROWS_AS(s0_moments(cfg, d, 0.0), math::DomainError);
}

TEST_CASE("s0_moments reference values at 100 m")
{
    const Setup s;
    const S0Moments m = s0_moments(s.cfg, s.d, 100.0);
    CHECK(m.m1 == doctest::Approx(3.3e3).epsilon(0.01));
    CHECK(m.m2 > m.m1 * m.m1);
}

TEST_CASE("s0_moments agree with sampled S_0 at 100 m")
{
    const Setup s;
    const S0Moments m = s0_moments(s.cfg, s.d, 100.0);
    const S0MomentEstimate e = estimate_s0_moments(s.cfg, s.d, 100.0, 100000, 53);
    CHECK(test::relative_error(e.m1.mean, m.m1) <= 0.02);
    CHECK(test::relative_error(e.m2.mean, m.m2) <= 0.05);
}

TEST_CASE("s0_moments reduce to the binomial expansion when the norm is deterministic")
{
    // N_B -> infinity with beta0 / N_B keeps E||h||^2 = c^2 and sends the
    // variance to zero, so m2 -> m1^2 -> (sqrt(rho) c + L_A)^4.
    NetworkConfig cfg = reference_config();
    const double n = 1e6;
    cfg.n_b = static_cast<int>(n);
    cfg.beta0 /= n;
    const DerivedParams d = derive(cfg);
    const double c = std::sqrt(n * path_loss(100.0, cfg.beta0, cfg.alpha1));
    const double amp = std::sqrt(d.rho_b) * c + d.l_a;
    const S0Moments m = s0_moments(cfg, d, 100.0);
    CHECK(m.m1 == doctest::Approx(amp * amp).epsilon(1e-5));
    CHECK(m.m2 == doctest::Approx(std::pow(amp, 4)).epsilon(1e-5));
    CHECK(m.m2 / (m.m1 * m.m1) - 1.0 < 1e-5);
}

TEST_CASE("moment_match examples and invariants")
{
    MomentMatch mm = moment_match(4.0, 24.0);
    CHECK(mm.k == doctest::Approx(2.0));
    CHECK(mm.theta == doctest::Approx(2.0));
    mm = moment_match(1.0, 2.0);
    CHECK(mm.k == doctest::Approx(1.0));
    CHECK(mm.theta == doctest::Approx(1.0));
    for (const double k : {0.4, 1.0, 3.7, 25.0}) {
        for (const double theta : {1e-3, 2.0, 462.0}) {
            mm = moment_match(k * theta, k * (k + 1) * theta * theta);
            CHECK(mm.k == doctest::Approx(k).epsilon(1e-12));
            CHECK(mm.theta == doctest::Approx(theta).epsilon(1e-12));
            CHECK(mm.k * mm.theta == doctest::Approx(mm.m1).epsilon(1e-14));
            CHECK(mm.k * mm.theta * mm.theta == doctest::Approx(mm.m2 - mm.m1 * mm.m1).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(moment_match(2.0, 4.0), DegenerateMoments);
    CHECK_THROWS_AS(moment_match(2.0, 3.0), DegenerateMoments);
    CHECK_THROWS_AS(moment_match(0.0, 1.0), DegenerateMoments);
}

TEST_CASE("laplace_intra")
{
    const Setup s;
    const ConditionalPoint pt = s.point(1.0, 100.0);
    CHECK(laplace_intra(0.0, pt, s.cfg, s.d) == 1.0);
    const double a = pt.threshold * s.d.rho_b * s.cfg.beta0 * std::pow(100.0, -s.cfg.alpha1) / pt.theta;
    CHECK(laplace_intra(1.0, pt, s.cfg, s.d) == doctest::Approx(std::pow(1.0 + a, -3.0)).epsilon(1e-14));

    NetworkConfig one = s.cfg;
    one.lambda_u = one.lambda_b; // one user per BS, no intra-cell interferers
    const DerivedParams d1 = derive(one);
    for (const double sv : {0.1, 1.0, 7.0}) {
        CHECK(laplace_intra(sv, pt, one, d1) == 1.0);
    }
}

TEST_CASE("laplace_inter")
{
    const Setup s;
    const ConditionalPoint pt = s.point(1.0, 100.0);
    CHECK(laplace_inter(0.0, pt, s.cfg, s.d) == 1.0);
    ConditionalPoint at_edge = pt;
    at_edge.d00 = edge(s.cfg);
    CHECK(laplace_inter(1.0, at_edge, s.cfg, s.d) == 1.0);

    for (const double sv : {0.5, 1.0, 2.0}) {
        const double t_theta = pt.threshold * s.d.rho_b * s.cfg.beta0 / pt.theta;
        auto f = [&](double r) {
            return (std::pow(1.0 + sv * t_theta * std::pow(r, -s.cfg.alpha1), -s.d.phi_bar_b) - 1.0) * r;
        };
        const double expected = std::exp(2.0 * std::numbers::pi * s.cfg.lambda_b * simpson(f, 100.0, 500.0, 20000));
        CHECK(laplace_inter(sv, pt, s.cfg, s.d) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("Laplace factorisation: exp(D1 + D2 + D3) equals the product form")
{
    const Setup s;
    for (const double t_db : {-5.0, 0.0, 10.0}) {
        for (const double d00 : {20.0, 100.0, 300.0}) {
            const ConditionalPoint pt = s.point(db_to_linear(t_db), d00);
            const double single = std::exp(log_laplace(1.0, pt, s.cfg, s.d));
            const double product = std::exp(-pt.threshold * pt.i_e / pt.theta) * laplace_intra(1.0, pt, s.cfg, s.d) *
                                   laplace_inter(1.0, pt, s.cfg, s.d);
            CHECK(single == doctest::Approx(product).epsilon(1e-10));
            CHECK(laplace_product(1.0, pt, s.cfg, s.d) == doctest::Approx(product).epsilon(1e-12));
        }
    }
}

TEST_CASE("g_derivatives vanish at T = 0")
{
    const Setup s;
    ConditionalPoint pt = s.point(1.0, 100.0);
    pt.threshold = 0.0;
    for (const double v : g_derivatives(6, 1.0, pt, s.cfg, s.d)) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("first derivative without other BSs is the closed subexpression")
{
    const Setup s;
    const ConditionalPoint pt = s.point(1.0, 100.0);
    NetworkConfig sparse = s.cfg;
    sparse.lambda_b = 1e-300;
    const double a = pt.threshold * s.d.rho_b * s.cfg.beta0 * std::pow(100.0, -s.cfg.alpha1) / pt.theta;
    const double expected = -pt.threshold * pt.i_e / pt.theta - (s.d.phi_bar_b - 1.0) * a / (1.0 + a);
    CHECK(g_derivatives(1, 1.0, pt, sparse, s.d)[0] == doctest::Approx(expected).epsilon(1e-13));
    CHECK_THROWS_AS(g_derivatives(0, 1.0, pt, s.cfg, s.d), math::DomainError);
}

TEST_CASE("g_derivatives match finite differences of ln L")
{
    const Setup s;
    for (const auto [t_db, d00] : {std::pair{-5.0, 50.0}, std::pair{0.0, 100.0}, std::pair{10.0, 200.0}}) {
        const ConditionalPoint pt = s.point(db_to_linear(t_db), d00);
        const auto g = g_derivatives(4, 1.0, pt, s.cfg, s.d);
        auto ln_l = [&](double sv) { return log_laplace(sv, pt, s.cfg, s.d); };
        for (int i = 1; i <= 4; ++i) {
            const double fd = math::finite_difference(ln_l, 1.0, i, 0.02);
            CAPTURE(i);
            CHECK(test::relative_error(g[static_cast<std::size_t>(i - 1)], fd) <= 1e-4);
        }
    }
}

TEST_CASE("shared-grid derivatives agree with per-order adaptive quadrature")
{
    const Setup s;
    for (const auto [t_db, d00] : {std::pair{-10.0, 5.0}, std::pair{0.0, 100.0}, std::pair{20.0, 400.0}}) {
        const ConditionalPoint pt = s.point(db_to_linear(t_db), d00);
        const auto fast = g_derivatives(40, 1.0, pt, s.cfg, s.d);
        const auto slow = g_derivatives_adaptive(40, 1.0, pt, s.cfg, s.d);
        for (std::size_t i = 0; i < fast.size(); ++i) {
            CAPTURE(i);
            CHECK(test::relative_error(fast[i], slow[i]) <= 1e-8);
        }
    }
}

TEST_CASE("derivative stack matches finite differences of L")
{
    const Setup s;
    for (const auto [t_db, d00] : {std::pair{-5.0, 50.0}, std::pair{0.0, 100.0}, std::pair{10.0, 200.0}}) {
        const ConditionalPoint pt = s.point(db_to_linear(t_db), d00);
        const DerivativeStack st = derivative_stack(4, pt, s.cfg, s.d);
        REQUIRE(st.l_derivs.size() == 5);
        CHECK(st.l_derivs[0] > 0.0);
        CHECK(st.l_derivs[0] == doctest::Approx(laplace_product(1.0, pt, s.cfg, s.d)).epsilon(1e-10));
        auto l = [&](double sv) { return laplace_product(sv, pt, s.cfg, s.d); };
        // L varies on the scale 1/|g'(1)|; the stencil follows it.
        const double h = 0.02 / std::max(1.0, std::abs(g_derivatives(1, 1.0, pt, s.cfg, s.d)[0]));
        for (int i = 1; i <= 4; ++i) {
            const double fd = math::finite_difference(l, 1.0, i, h);
            CAPTURE(i);
            CHECK(test::relative_error(st.l_derivs[static_cast<std::size_t>(i)], fd) <= 1e-4);
        }
    }
}

TEST_CASE("derivative stack matches the Leibniz recurrence for L = exp(g)")
{
    const Setup s;
    const int n = 20;
    for (const auto [t_db, d00] : {std::pair{-10.0, 30.0}, std::pair{0.0, 100.0}, std::pair{15.0, 300.0}}) {
        const ConditionalPoint pt = s.point(db_to_linear(t_db), d00);
        const auto g = g_derivatives(n, 1.0, pt, s.cfg, s.d);
        std::vector<double> l(n + 1);
        l[0] = laplace_product(1.0, pt, s.cfg, s.d);
        for (int m = 1; m <= n; ++m) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) {
                acc += std::exp(std::lgamma(m) - std::lgamma(j + 1) - std::lgamma(m - j)) * g[j] * l[m - 1 - j];
            }
            l[m] = acc;
        }
        const DerivativeStack st = derivative_stack(n, pt, s.cfg, s.d);
        for (int m = 0; m <= n; ++m) {
            CAPTURE(m);
            CHECK(test::relative_error(st.l_derivs[static_cast<std::size_t>(m)], l[m]) <= 1e-9);
        }
    }
}

TEST_CASE("constant interference: series equals the regularised upper incomplete gamma")
{
    NetworkConfig cfg = reference_config();
    DerivedParams d = derive(cfg);
    d.phi_bar_b = 1.0; // no intra-cell term
    for (const double c : {0.5, 3.0, 40.0}) {
        // d00 at the disk edge leaves no inter-cell range.
        const ConditionalPoint pt{2.0, edge(cfg), 1.5, c};
        const auto p = integer_shape_coverage(3, pt, cfg, d);
        for (int kappa = 1; kappa <= 3; ++kappa) {
            CHECK(p[static_cast<std::size_t>(kappa - 1)] ==
                  doctest::Approx(boost::math::gamma_q(kappa, pt.threshold * c / pt.theta)).epsilon(1e-12));
        }
    }
}

TEST_CASE("conditional_coverage applies linear weighting between neighbouring shapes")
{
    const Setup s;
    const double t = 1.0, d00 = 100.0;
    const S0Moments m = s0_moments(s.cfg, s.d, d00);
    const double k = moment_match(m.m1, m.m2).k;
    const auto p = integer_shape_coverage(static_cast<int>(std::ceil(k)), s.point(t, d00), s.cfg, s.d);
    const double lo = p[static_cast<std::size_t>(std::floor(k)) - 1];
    const double hi = p.back();
    const double expected = (std::ceil(k) - k) * lo + (k - std::floor(k)) * hi;
    CHECK(conditional_coverage(t, d00, s.cfg, s.d) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("shape 1 reduces to the single term L(1)")
{
    NetworkConfig cfg = reference_config();
    cfg.p_a = 0.0;
    cfg.n_b = 1; // S_0 exponential, k = 1
    const DerivedParams d = derive(cfg);
    const double t = 0.5, d00 = 80.0;
    const S0Moments m = s0_moments(cfg, d, d00);
    const MomentMatch mm = moment_match(m.m1, m.m2);
    CHECK(mm.k == doctest::Approx(1.0).epsilon(1e-14));
    const ConditionalPoint pt{t, d00, mm.theta, d.i_a_bar + cfg.noise};
    CHECK(conditional_coverage(t, d00, cfg, d) ==
          doctest::Approx(laplace_product(1.0, pt, cfg, d)).epsilon(1e-9));
}

TEST_CASE("conditional_coverage limits and errors")
{
    const Setup s;
    CHECK(conditional_coverage(1e-9, 100.0, s.cfg, s.d) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(conditional_coverage(1e6, 100.0, s.cfg, s.d) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(conditional_coverage(0.0, 100.0, s.cfg, s.d), math::DomainError);
    CHECK_THROWS_AS(conditional_coverage(1.0, 0.0, s.cfg, s.d), math::DomainError);
    AnalyticOptions capped;
    capped.max_order = 4;
    CHECK_THROWS_AS(conditional_coverage(1.0, 100.0, s.cfg, s.d, capped), OrderCapExceeded);
}

TEST_CASE("conditional_coverage agrees with the conditional-model oracle at 100 m, 0 dB")
{
    const Setup s;
    const S0Moments m = s0_moments(s.cfg, s.d, 100.0);
    const MomentMatch mm = moment_match(m.m1, m.m2);
    const Estimate e = estimate_conditional_coverage(1.0, 100.0, mm.k, mm.theta, s.cfg, s.d, 100000, 51);
    CHECK(std::abs(conditional_coverage(1.0, 100.0, s.cfg, s.d) - e.mean) <= 0.02);
}

TEST_CASE("cell-free only: S_0 is deterministic and coverage is a step")
{
    const NetworkConfig cfg = apply_architecture(reference_config(), Architecture::cell_free_only);
    const DerivedParams d = derive(cfg);
    const double cut = d.l_a * d.l_a / (d.i_a_bar + cfg.noise);
    AnalyticStats stats;
    CHECK(coverage(0.9 * cut, cfg, d, {}, &stats) == 1.0);
    CHECK(coverage(1.1 * cut, cfg, d, {}, &stats) == 0.0);
    CHECK(stats.degenerate == 2);
}

TEST_CASE("coverage is monotone, bounded and rarely clamped")
{
    const Setup s;
    AnalyticStats stats;
    const auto grid = threshold_grid_db(-10.0, 30.0, 1.0);
    const CoverageCurve c = coverage_curve(grid, s.cfg, s.d, "analytic", {}, &stats);
    REQUIRE(c.size() == grid.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(c.probabilities[i] >= 0.0);
        CHECK(c.probabilities[i] <= 1.0);
        CHECK(c.stderrs[i] == 0.0);
        if (i > 0) {
            CHECK(c.probabilities[i] <= c.probabilities[i - 1] + 1e-9);
        }
    }
    CHECK(stats.evaluations > 0);
    CHECK(static_cast<double>(stats.clamped) < 0.01 * static_cast<double>(stats.evaluations));
    CHECK_THROWS_AS(coverage(-1.0, s.cfg, s.d), math::DomainError);
}

TEST_CASE("without AP power the analytic curve tracks Monte Carlo within 0.05")
{
    NetworkConfig analytic_cfg = reference_config();
    analytic_cfg.p_a = 0.0;
    NetworkConfig mc_cfg = reference_config();
    mc_cfg.lambda_a = 0.0;
    const auto grid = threshold_grid_db(-10.0, 30.0, 1.0);
    const CoverageCurve a = coverage_curve(grid, analytic_cfg, derive(analytic_cfg), "analytic");
    const CoverageCurve m = empirical_coverage(mc_cfg, grid, 1000, 5, 52);
    double gap = 0.0, at = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g = std::abs(a.probabilities[i] - m.probabilities[i]);
        if (g > gap) {
            gap = g;
            at = grid[i];
        }
    }
    MESSAGE("max gap " << gap << " at " << at << " dB");
    CHECK(gap <= 0.05);
}
