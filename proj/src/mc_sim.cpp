#include "hcf/mc_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "hcf/channel.hpp"
#include "hcf/simd/kernels.hpp"

namespace hcf {

void GaussianFading::fill(std::span<double> re, std::span<double> im)
{
    fill_complex_gaussian(re, im, rng_);
}

void ConstantFading::fill(std::span<double> re, std::span<double> im)
{
    std::fill(re.begin(), re.end(), value_.real());
    std::fill(im.begin(), im.end(), value_.imag());
}

namespace {

// Structure-of-arrays complex buffer matching simd::ComplexBlock.
struct Block {
    std::vector<double> re;
    std::vector<double> im;
    std::size_t links = 0;
    int antennas = 0;

    void resize(std::size_t n_links, int n_antennas)
    {
        links = n_links;
        antennas = n_antennas;
        re.assign(n_links * static_cast<std::size_t>(n_antennas), 0.0);
        im.assign(re.size(), 0.0);
    }

    void fill(FadingSource& src) { src.fill(re, im); }

    [[nodiscard]] simd::ComplexBlock view() const { return {re, im, links, antennas}; }
};

class RunningMoments {
public:
    void add(double x)
    {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    [[nodiscard]] Estimate estimate() const
    {
        Estimate e;
        e.mean = mean_;
        e.std_error = n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_)) : 0.0;
        return e;
    }

private:
    long long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

double clamped_distance(Point a, Point b, double min_distance)
{
    return std::max(distance(a, b), min_distance);
}

} // namespace

DropResult simulate_drop(const NetworkConfig& cfg, const DerivedParams& derived, const NetworkDrop& drop,
                         FadingSource& fading)
{
    const auto& kernels = simd::active_kernels();
    const Point origin = drop.ue.points.at(0);
    const bool bs_layer = cfg.p_b > 0.0 && !drop.bs.empty();
    const bool ap_layer = derived.rho_a > 0.0 && !drop.ap.empty();
    const double sqrt_rho_b = std::sqrt(derived.rho_b);
    const double sqrt_rho_a = std::sqrt(derived.rho_a);
    const std::size_t n_ue = drop.ue.size();

    DropResult out;

    // BS -> UE 0 channels, antenna-major per BS.
    std::vector<double> sqrt_beta;
    Block h0;
    if (bs_layer) {
        if (drop.assoc.size() != n_ue) {
            throw std::invalid_argument("simulate_drop: association map does not cover every UE");
        }
        sqrt_beta.resize(drop.bs.size());
        for (std::size_t m = 0; m < drop.bs.size(); ++m) {
            const double d = clamped_distance(drop.bs.points[m], origin, cfg.min_distance);
            sqrt_beta[m] = std::sqrt(path_loss(d, cfg.beta0, cfg.alpha1));
        }
        h0.resize(drop.bs.size() * static_cast<std::size_t>(cfg.n_b), 1);
        h0.fill(fading);
    }
    auto bs_vec = [&](std::size_t m, int a, const std::vector<double>& buf) {
        return buf[m * static_cast<std::size_t>(cfg.n_b) + static_cast<std::size_t>(a)];
    };

    // AP -> UE 0 channels, scaled by sqrt(delta_j0).
    std::vector<double> sqrt_delta;
    Block g0;
    if (ap_layer) {
        const std::size_t n_ap = drop.ap.size();
        sqrt_delta.resize(n_ap);
        for (std::size_t j = 0; j < n_ap; ++j) {
            const double l = clamped_distance(drop.ap.points[j], origin, cfg.min_distance);
            sqrt_delta[j] = std::sqrt(path_loss(l, cfg.delta0, cfg.alpha2));
        }
        g0.resize(n_ap, cfg.n_a);
        g0.fill(fading);
        for (int a = 0; a < cfg.n_a; ++a) {
            for (std::size_t j = 0; j < n_ap; ++j) {
                const std::size_t k = static_cast<std::size_t>(a) * n_ap + j;
                g0.re[k] *= sqrt_delta[j];
                g0.im[k] *= sqrt_delta[j];
            }
        }
        std::vector<double> ones(n_ap, 1.0);
        out.s0_a = sqrt_rho_a * kernels.scaled_norm_sum(ones, g0.view());
    }

    if (bs_layer) {
        const auto serving = static_cast<std::size_t>(drop.assoc[0]);
        double norm2 = 0.0;
        for (int a = 0; a < cfg.n_b; ++a) {
            norm2 += bs_vec(serving, a, h0.re) * bs_vec(serving, a, h0.re) +
                     bs_vec(serving, a, h0.im) * bs_vec(serving, a, h0.im);
        }
        out.s0_b = sqrt_rho_b * sqrt_beta[serving] * std::sqrt(norm2);
    }

    Block served_bs;
    if (bs_layer) {
        served_bs.resize(static_cast<std::size_t>(cfg.n_b), 1);
    }
    Block served_ap;
    if (ap_layer) {
        served_ap.resize(drop.ap.size(), cfg.n_a);
    }

    for (std::size_t i = 1; i < n_ue; ++i) {
        std::complex<double> coeff{};
        if (bs_layer) {
            const auto m = static_cast<std::size_t>(drop.assoc[i]);
            served_bs.fill(fading);
            std::complex<double> dot{};
            double norm2 = 0.0;
            for (int a = 0; a < cfg.n_b; ++a) {
                const std::complex<double> h{bs_vec(m, a, h0.re), bs_vec(m, a, h0.im)};
                const std::complex<double> z{served_bs.re[a], served_bs.im[a]};
                dot += std::conj(h) * z;
                norm2 += std::norm(z);
            }
            const std::complex<double> part = sqrt_beta[m] * dot / std::sqrt(norm2);
            coeff += sqrt_rho_b * part;
            const double power = derived.rho_b * std::norm(part);
            if (m == static_cast<std::size_t>(drop.assoc[0])) {
                out.i_b0 += power;
            } else {
                out.i_b += power;
            }
        }
        if (ap_layer) {
            served_ap.fill(fading);
            const simd::ProjectionSums p = kernels.projection_sums(g0.view(), served_ap.view());
            coeff += sqrt_rho_a * std::complex<double>{p.re, p.im};
            out.i_a += derived.rho_a * p.power;
        }
        out.i_exact += std::norm(coeff);
    }

    const double amplitude = out.s0_b + out.s0_a;
    out.s0 = amplitude * amplitude;
    out.sinr_exact = out.s0 / (out.i_exact + cfg.noise);
    out.sinr_decomposed = out.s0 / (out.i_b0 + out.i_b + out.i_a + cfg.noise);
    return out;
}

DropResult simulate_drop(const NetworkConfig& cfg, const DerivedParams& derived, const NetworkDrop& drop,
                         Rng& rng)
{
    GaussianFading fading(rng);
    return simulate_drop(cfg, derived, drop, fading);
}

namespace {

NetworkDrop drop_for_simulation(const NetworkConfig& cfg, const DerivedParams& derived, Rng& rng)
{
    // The AP layer carries no power when rho_a == 0; leaving it out keeps the
    // random stream identical to a configuration with no APs at all.
    if (derived.rho_a == 0.0 && cfg.lambda_a != 0.0) {
        NetworkConfig no_ap = cfg;
        no_ap.lambda_a = 0.0;
        return make_drop(no_ap, rng);
    }
    return make_drop(cfg, rng);
}

} // namespace

SimRun run_monte_carlo(const NetworkConfig& cfg, const DerivedParams& derived, const SimOptions& opts)
{
    if (opts.n_drops < 1 || opts.n_fading < 1) {
        throw std::invalid_argument("run_monte_carlo: n_drops and n_fading must be >= 1");
    }
    const auto n_drops = static_cast<std::size_t>(opts.n_drops);
    const auto n_fading = static_cast<std::size_t>(opts.n_fading);

    SimRun run;
    run.results.resize(n_drops * n_fading);
    std::vector<int> resamples(n_drops, 0);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try {
            for (std::size_t d = next++; d < n_drops; d = next++) {
                Rng rng = make_stream(opts.seed, d);
                const NetworkDrop drop = drop_for_simulation(cfg, derived, rng);
                resamples[d] = drop.bs_resamples;
                for (std::size_t f = 0; f < n_fading; ++f) {
                    run.results[d * n_fading + f] = simulate_drop(cfg, derived, drop, rng);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = n_drops;
        }
    };

    const int workers = std::clamp(opts.workers, 1, opts.n_drops);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    for (const int r : resamples) {
        run.bs_resamples += r;
    }
    return run;
}

CoverageCurve exact_curve(const SimRun& run, const std::vector<double>& thresholds_db, std::string label)
{
    std::vector<double> sinr;
    sinr.reserve(run.results.size());
    for (const auto& r : run.results) {
        sinr.push_back(r.sinr_exact);
    }
    return empirical_curve(sinr, thresholds_db, std::move(label));
}

CoverageCurve decomposed_curve(const SimRun& run, const std::vector<double>& thresholds_db, std::string label)
{
    std::vector<double> sinr;
    sinr.reserve(run.results.size());
    for (const auto& r : run.results) {
        sinr.push_back(r.sinr_decomposed);
    }
    return empirical_curve(sinr, thresholds_db, std::move(label));
}

CoverageCurve empirical_coverage(const NetworkConfig& cfg, const std::vector<double>& thresholds_db,
                                 int n_drops, int n_fading, std::uint64_t seed, int workers)
{
    const DerivedParams derived = derive(cfg);
    SimOptions opts{n_drops, n_fading, seed, workers};
    return exact_curve(run_monte_carlo(cfg, derived, opts), thresholds_db, "mc_exact");
}

Estimate estimate_ap_signal_mean(const NetworkConfig& cfg, const DerivedParams& derived, int n_draws,
                                 std::uint64_t seed)
{
    const auto& kernels = simd::active_kernels();
    Rng rng = make_stream(seed, 0x4c41);
    GaussianFading fading(rng);
    const double sqrt_rho_a = std::sqrt(derived.rho_a);
    const Point origin{};

    RunningMoments acc;
    Block g0;
    std::vector<double> scale;
    for (int n = 0; n < n_draws; ++n) {
        const PointSet ap = sample_ppp(cfg.lambda_a, cfg.radius, NodeKind::ap, rng);
        scale.resize(ap.size());
        for (std::size_t j = 0; j < ap.size(); ++j) {
            const double l = clamped_distance(ap.points[j], origin, cfg.min_distance);
            scale[j] = std::sqrt(path_loss(l, cfg.delta0, cfg.alpha2));
        }
        g0.resize(ap.size(), cfg.n_a);
        g0.fill(fading);
        acc.add(sqrt_rho_a * kernels.scaled_norm_sum(scale, g0.view()));
    }
    return acc.estimate();
}

namespace {

std::size_t zero_truncated_poisson(double mean, Rng& rng)
{
    // Inversion over k >= 1 of P(N = k | N >= 1).
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    const double norm = -std::expm1(-mean);
    double pk = std::exp(-mean) * mean / norm;
    double cdf = pk;
    std::size_t k = 1;
    while (u > cdf && k < 10000) {
        ++k;
        pk *= mean / static_cast<double>(k);
        cdf += pk;
    }
    return k;
}

} // namespace

Estimate estimate_ap_interference_mean(const NetworkConfig& cfg, const DerivedParams& derived, int n_draws,
                                       std::uint64_t seed)
{
    const auto& kernels = simd::active_kernels();
    Rng rng = make_stream(seed, 0x4941);
    GaussianFading fading(rng);
    const double pi = std::numbers::pi;

    // Inner disk holds about one AP on average.
    const double r_split = std::min(cfg.radius, 1.0 / std::sqrt(pi * std::max(cfg.lambda_a, 1e-300)));
    // Below r_cut the share of the mean is (r_cut / R)^(2 - alpha2) = 1e-3.
    const double r_cut = cfg.radius * std::pow(1e-3, 1.0 / (2.0 - cfg.alpha2));

    struct Shell {
        double r_in;
        double r_out;
        double mean;
    };
    std::vector<Shell> shells;
    for (double r_out = r_split; r_out > r_cut; r_out *= 0.5) {
        const double r_in = std::max(0.5 * r_out, r_cut);
        shells.push_back({r_in, r_out, cfg.lambda_a * pi * (r_out * r_out - r_in * r_in)});
    }
    std::poisson_distribution<long long> outer_count(cfg.lambda_a * pi *
                                                     (cfg.radius * cfg.radius - r_split * r_split));
    std::poisson_distribution<long long> ue_count(derived.u_bar);
    const Point origin{};

    RunningMoments acc;
    PointSet ap{NodeKind::ap, {}};
    std::vector<double> weight;
    Block g0;
    Block served;
    for (int n = 0; n < n_draws; ++n) {
        ap.points.clear();
        weight.clear();
        append_uniform_annulus(ap, static_cast<std::size_t>(outer_count(rng)), r_split, cfg.radius, rng);
        weight.resize(ap.size(), 1.0);
        for (const Shell& s : shells) {
            const std::size_t k = zero_truncated_poisson(s.mean, rng);
            append_uniform_annulus(ap, k, s.r_in, s.r_out, rng);
            weight.resize(ap.size(), -std::expm1(-s.mean));
        }

        const std::size_t n_ap = ap.size();
        g0.resize(n_ap, cfg.n_a);
        g0.fill(fading);
        for (std::size_t j = 0; j < n_ap; ++j) {
            const double l = distance(ap.points[j], origin);
            const double scale = std::sqrt(weight[j] * path_loss(l, cfg.delta0, cfg.alpha2));
            for (int a = 0; a < cfg.n_a; ++a) {
                g0.re[static_cast<std::size_t>(a) * n_ap + j] *= scale;
                g0.im[static_cast<std::size_t>(a) * n_ap + j] *= scale;
            }
        }

        const long long others = ue_count(rng);
        served.resize(n_ap, cfg.n_a);
        double total = 0.0;
        for (long long i = 0; i < others; ++i) {
            served.fill(fading);
            total += kernels.projection_sums(g0.view(), served.view()).power;
        }
        acc.add(derived.rho_a * total);
    }
    return acc.estimate();
}

S0MomentEstimate estimate_s0_moments(const NetworkConfig& cfg, const DerivedParams& derived, double d00,
                                     int n_samples, std::uint64_t seed)
{
    if (!(d00 > 0.0)) {
        throw std::invalid_argument("estimate_s0_moments: d00 must be positive");
    }
    const auto& kernels = simd::active_kernels();
    Rng rng = make_stream(seed, 0x5330);
    GaussianFading fading(rng);
    const double sqrt_rho_b = std::sqrt(derived.rho_b);
    const double sqrt_rho_a = std::sqrt(derived.rho_a);
    const double sqrt_beta00 = std::sqrt(path_loss(d00, cfg.beta0, cfg.alpha1));
    const bool ap_layer = derived.rho_a > 0.0;
    const Point origin{};

    RunningMoments first;
    RunningMoments second;
    Block h00;
    h00.resize(static_cast<std::size_t>(cfg.n_b), 1);
    Block g0;
    std::vector<double> scale;
    for (int n = 0; n < n_samples; ++n) {
        h00.fill(fading);
        double norm2 = 0.0;
        for (int a = 0; a < cfg.n_b; ++a) {
            norm2 += h00.re[a] * h00.re[a] + h00.im[a] * h00.im[a];
        }
        double amplitude = sqrt_rho_b * sqrt_beta00 * std::sqrt(norm2);
        if (ap_layer) {
            const PointSet ap = sample_ppp(cfg.lambda_a, cfg.radius, NodeKind::ap, rng);
            scale.resize(ap.size());
            for (std::size_t j = 0; j < ap.size(); ++j) {
                const double l = clamped_distance(ap.points[j], origin, cfg.min_distance);
                scale[j] = std::sqrt(path_loss(l, cfg.delta0, cfg.alpha2));
            }
            g0.resize(ap.size(), cfg.n_a);
            g0.fill(fading);
            amplitude += sqrt_rho_a * kernels.scaled_norm_sum(scale, g0.view());
        }
        const double s0 = amplitude * amplitude;
        first.add(s0);
        second.add(s0 * s0);
    }
    return {first.estimate(), second.estimate()};
}

Estimate estimate_laplace_intra(double s, double threshold, const NetworkConfig& cfg,
                                const DerivedParams& derived, double d00, double theta, int n_samples,
                                std::uint64_t seed)
{
    Rng rng = make_stream(seed, 0x4c49);
    const double shape = derived.phi_bar_b - 1.0;
    const double scale = threshold * derived.rho_b * path_loss(d00, cfg.beta0, cfg.alpha1) / theta;
    RunningMoments acc;
    for (int n = 0; n < n_samples; ++n) {
        const double y = shape > 0.0 ? scale * gamma_sample(shape, 1.0, rng) : 0.0;
        acc.add(std::exp(-s * y));
    }
    return acc.estimate();
}

namespace {

// T * I_B / theta for one draw of the BS process beyond d00.
double sample_inter_cell(double threshold, const NetworkConfig& cfg, const DerivedParams& derived,
                         double d00, double theta, std::poisson_distribution<long long>& count, Rng& rng)
{
    if (!(d00 < cfg.radius)) {
        return 0.0;
    }
    PointSet bs{NodeKind::bs, {}};
    append_uniform_annulus(bs, static_cast<std::size_t>(count(rng)), d00, cfg.radius, rng);
    const Point origin{};
    double total = 0.0;
    for (const Point& p : bs.points) {
        const double d = std::max(distance(p, origin), d00);
        total += path_loss(d, cfg.beta0, cfg.alpha1) * gamma_sample(derived.phi_bar_b, 1.0, rng);
    }
    return threshold * derived.rho_b * total / theta;
}

std::poisson_distribution<long long> annulus_count(const NetworkConfig& cfg, double d00)
{
    const double r_in = std::min(d00, cfg.radius);
    const double mean = cfg.lambda_b * std::numbers::pi * (cfg.radius * cfg.radius - r_in * r_in);
    return std::poisson_distribution<long long>(std::max(mean, 1e-300));
}

} // namespace

Estimate estimate_laplace_inter(double s, double threshold, const NetworkConfig& cfg,
                                const DerivedParams& derived, double d00, double theta, int n_samples,
                                std::uint64_t seed)
{
    Rng rng = make_stream(seed, 0x4c42);
    auto count = annulus_count(cfg, d00);
    RunningMoments acc;
    for (int n = 0; n < n_samples; ++n) {
        acc.add(std::exp(-s * sample_inter_cell(threshold, cfg, derived, d00, theta, count, rng)));
    }
    return acc.estimate();
}

Estimate estimate_conditional_coverage(double threshold, double d00, double k, double theta,
                                       const NetworkConfig& cfg, const DerivedParams& derived,
                                       int n_samples, std::uint64_t seed)
{
    Rng rng = make_stream(seed, 0x4343);
    auto count = annulus_count(cfg, d00);
    const double intra_shape = derived.phi_bar_b - 1.0;
    const double intra_scale = derived.rho_b * path_loss(d00, cfg.beta0, cfg.alpha1);
    const double floor = derived.i_a_bar + cfg.noise;
    RunningMoments acc;
    for (int n = 0; n < n_samples; ++n) {
        const double signal = gamma_sample(k, theta, rng);
        const double intra = intra_shape > 0.0 ? intra_scale * gamma_sample(intra_shape, 1.0, rng) : 0.0;
        // sample_inter_cell returns T * I_B / theta with theta = 1 here.
        const double inter = sample_inter_cell(1.0, cfg, derived, d00, 1.0, count, rng);
        acc.add(signal > threshold * (intra + inter + floor) ? 1.0 : 0.0);
    }
    return acc.estimate();
}

} // namespace hcf
