#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "hcf/coverage_curve.hpp"
#include "hcf/geometry.hpp"
#include "hcf/params.hpp"
#include "hcf/rng.hpp"

namespace hcf {

/// Powers seen by the typical UE in one (drop, fading) realisation.
struct DropResult {
    double s0 = 0.0;      ///< (S_0B + S_0A)^2
    double s0_b = 0.0;    ///< BS amplitude sqrt(rho_b) ||h_00||
    double s0_a = 0.0;    ///< AP amplitude sqrt(rho_a) sum_j ||g_j0||
    double i_b0 = 0.0;    ///< intra-cell interference (per-term powers)
    double i_b = 0.0;     ///< inter-cell interference (per-term powers)
    double i_a = 0.0;     ///< AP interference (per-term powers)
    double i_exact = 0.0; ///< sum_i |c_i|^2 with BS and AP parts added before squaring
    double sinr_exact = 0.0;
    double sinr_decomposed = 0.0;
};

/// Where small-scale fading comes from. fill() receives real and imaginary
/// parts of a block of CN(0, 1) entries.
class FadingSource {
public:
    virtual ~FadingSource() = default;
    virtual void fill(std::span<double> re, std::span<double> im) = 0;
};

class GaussianFading final : public FadingSource {
public:
    explicit GaussianFading(Rng& rng) : rng_(rng) {}
    void fill(std::span<double> re, std::span<double> im) override;

private:
    Rng& rng_;
};

/// Every entry set to one value; for deterministic checks.
class ConstantFading final : public FadingSource {
public:
    explicit ConstantFading(std::complex<double> value) : value_(value) {}
    void fill(std::span<double> re, std::span<double> im) override;

private:
    std::complex<double> value_;
};

/// Exact received-signal model for the typical UE over one fading realisation.
/// Each BS serves the UEs associated with it; every AP serves every UE.
DropResult simulate_drop(const NetworkConfig& cfg, const DerivedParams& derived, const NetworkDrop& drop,
                         FadingSource& fading);
DropResult simulate_drop(const NetworkConfig& cfg, const DerivedParams& derived, const NetworkDrop& drop,
                         Rng& rng);

struct SimOptions {
    int n_drops = 1000;
    int n_fading = 5;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct SimRun {
    std::vector<DropResult> results; ///< drop-major, n_drops * n_fading entries
    int bs_resamples = 0;
};

/// Drop d uses stream make_stream(seed, d), so the output does not depend on
/// the worker count.
SimRun run_monte_carlo(const NetworkConfig& cfg, const DerivedParams& derived, const SimOptions& opts);

CoverageCurve exact_curve(const SimRun& run, const std::vector<double>& thresholds_db, std::string label);
CoverageCurve decomposed_curve(const SimRun& run, const std::vector<double>& thresholds_db, std::string label);

CoverageCurve empirical_coverage(const NetworkConfig& cfg, const std::vector<double>& thresholds_db,
                                 int n_drops, int n_fading, std::uint64_t seed, int workers = 1);

// Estimators used as independent checks of the closed forms.

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Sample mean of sqrt(rho_a) sum_j ||g_j0|| over fresh AP geometries and fading.
Estimate estimate_ap_signal_mean(const NetworkConfig& cfg, const DerivedParams& derived, int n_draws,
                                 std::uint64_t seed);

/// Mean of rho_a sum_{i != 0} sum_j |g_j0^H g_ji / ||g_ji|| |^2.
///
/// The per-AP power has infinite variance near the typical UE, so plain PPP
/// draws essentially never see the APs that carry a sizeable share of the
/// mean. The disk is therefore split: the outer part is sampled as a plain
/// PPP, and the inner disk (about one expected AP) is cut into geometric
/// shells, each sampled conditioned on holding at least one AP and weighted by
/// the probability of that event. Still an unbiased Monte Carlo estimate of
/// the process mean, apart from shells below a cutoff whose share of the mean
/// is under 1e-3.
Estimate estimate_ap_interference_mean(const NetworkConfig& cfg, const DerivedParams& derived, int n_draws,
                                       std::uint64_t seed);

struct S0MomentEstimate {
    Estimate m1;
    Estimate m2;
};

/// Raw moments of S_0 with the serving BS pinned at distance d00 and the AP
/// layer and all fading resampled.
S0MomentEstimate estimate_s0_moments(const NetworkConfig& cfg, const DerivedParams& derived, double d00,
                                     int n_samples, std::uint64_t seed);

/// E[exp(-s T I_B0 / theta)] with I_B0 = rho_b beta_00 Gamma(phi_bar - 1, 1).
Estimate estimate_laplace_intra(double s, double threshold, const NetworkConfig& cfg,
                                const DerivedParams& derived, double d00, double theta, int n_samples,
                                std::uint64_t seed);

/// E[exp(-s T I_B / theta)], I_B summed over a PPP of BSs in d00 < r < R with
/// Gamma(phi_bar, 1) marks.
Estimate estimate_laplace_inter(double s, double threshold, const NetworkConfig& cfg,
                                const DerivedParams& derived, double d00, double theta, int n_samples,
                                std::uint64_t seed);

/// P[S > T (I_B0 + I_B + I_A_bar + noise)] with S ~ Gamma(k, theta) and the
/// interference drawn as in the two Laplace estimators above.
Estimate estimate_conditional_coverage(double threshold, double d00, double k, double theta,
                                       const NetworkConfig& cfg, const DerivedParams& derived,
                                       int n_samples, std::uint64_t seed);

} // namespace hcf
