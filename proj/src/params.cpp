#include "hcf/params.hpp"

#include <cmath>
#include <numbers>

#include "hcf/mathkit.hpp"

namespace hcf {

namespace {

std::string join_rules(const std::vector<std::string>& rules)
{
    std::string out = "invalid network config:";
    for (const auto& r : rules) {
        out += ' ';
        out += r;
    }
    return out;
}

} // namespace

double NetworkConfig::area() const
{
    return std::numbers::pi * radius * radius;
}

ValidationError::ValidationError(std::vector<std::string> rules)
    : std::invalid_argument(join_rules(rules)), rules_(std::move(rules))
{
}

std::vector<std::string> validate(const NetworkConfig& cfg)
{
    std::vector<std::string> bad;
    auto check = [&](bool ok, const char* rule) {
        if (!ok) {
            bad.emplace_back(rule);
        }
    };
    check(cfg.lambda_b > 0.0, "lambda_b_positive");
    check(cfg.lambda_a >= 0.0, "lambda_a_nonnegative");
    check(cfg.lambda_u > 0.0, "lambda_u_positive");
    check(cfg.lambda_u >= cfg.lambda_b, "lambda_u_ge_lambda_b");
    check(cfg.n_b >= 1, "n_b_ge_1");
    check(cfg.n_a >= 1, "n_a_ge_1");
    check(cfg.p_b >= 0.0 && cfg.p_a >= 0.0, "powers_nonnegative");
    check(cfg.p_b > 0.0 || cfg.p_a > 0.0, "some_power_positive");
    check(cfg.p_b == 0.0 || cfg.p_a <= cfg.p_b, "p_a_le_p_b");
    check(cfg.alpha1 > 2.0, "alpha1_gt_2");
    check(cfg.alpha2 > 0.0 && cfg.alpha2 < 2.0, "alpha2_in_0_2");
    check(cfg.beta0 > 0.0, "beta0_positive");
    check(cfg.delta0 > 0.0, "delta0_positive");
    check(cfg.radius > 0.0, "radius_positive");
    check(cfg.noise > 0.0, "noise_positive");
    check(cfg.min_distance > 0.0 && cfg.min_distance < cfg.radius, "min_distance_in_0_radius");
    if (cfg.lambda_u > 0.0 && cfg.radius > 0.0) {
        check(cfg.lambda_u * cfg.area() >= 1.0, "mean_ue_count_ge_1");
    }
    return bad;
}

double mean_ap_signal(const NetworkConfig& cfg, const DerivedParams& partial)
{
    if (!(cfg.alpha2 < 4.0)) {
        throw math::DomainError("mean_ap_signal: alpha2 must be < 4");
    }
    if (partial.rho_a == 0.0 || cfg.lambda_a == 0.0) {
        return 0.0;
    }
    const double pi = std::numbers::pi;
    return 4.0 * pi * std::sqrt(partial.rho_a) * cfg.lambda_a * std::sqrt(cfg.delta0) /
           (4.0 - cfg.alpha2) * math::gamma_ratio_half(cfg.n_a) *
           std::pow(cfg.area() / pi, 1.0 - cfg.alpha2 / 4.0);
}

double mean_ap_interference(const NetworkConfig& cfg, const DerivedParams& partial)
{
    if (!(cfg.alpha2 < 2.0)) {
        throw math::DomainError("mean_ap_interference: alpha2 must be < 2");
    }
    if (partial.rho_a == 0.0 || cfg.lambda_a == 0.0) {
        return 0.0;
    }
    const double pi = std::numbers::pi;
    return 2.0 * pi * partial.rho_a * cfg.lambda_a * cfg.delta0 * (partial.u_bar - 1.0) /
           (2.0 - cfg.alpha2) * std::pow(cfg.area() / pi, 1.0 - cfg.alpha2 / 2.0);
}

DerivedParams derive(const NetworkConfig& cfg)
{
    if (auto bad = validate(cfg); !bad.empty()) {
        throw ValidationError(std::move(bad));
    }
    DerivedParams d;
    d.phi_bar_b = cfg.lambda_u / cfg.lambda_b;
    d.eta_b = cfg.lambda_b / cfg.lambda_u;
    d.u_bar = cfg.lambda_u * cfg.area();
    d.eta_a = 1.0 / d.u_bar;
    d.rho_b = cfg.p_b * d.eta_b;
    d.rho_a = cfg.p_a * d.eta_a;
    d.l_a = mean_ap_signal(cfg, d);
    d.i_a_bar = mean_ap_interference(cfg, d);
    return d;
}

double free_space_reference_gain(double carrier_hz)
{
    const double amp = speed_of_light / (4.0 * std::numbers::pi * carrier_hz);
    return amp * amp;
}

NetworkConfig reference_config()
{
    NetworkConfig cfg;
    cfg.lambda_b = 40e-6;
    cfg.lambda_a = 200e-6;
    cfg.lambda_u = 160e-6;
    cfg.n_b = 4;
    cfg.n_a = 2;
    cfg.p_b = 1e13;
    cfg.p_a = 3e-5 * cfg.p_b;
    cfg.alpha1 = 2.7;
    cfg.alpha2 = 1.8;
    cfg.beta0 = free_space_reference_gain(3.5e9);
    cfg.delta0 = cfg.beta0;
    cfg.radius = 500.0;
    cfg.noise = 1.0;
    return cfg;
}

std::string_view to_string(Architecture arch)
{
    switch (arch) {
    case Architecture::hybrid:
        return "hybrid";
    case Architecture::cellular_only:
        return "cellular_only";
    case Architecture::cell_free_only:
        return "cell_free_only";
    }
    return "unknown";
}

Architecture parse_architecture(std::string_view name)
{
    if (name == "hybrid") {
        return Architecture::hybrid;
    }
    if (name == "cellular_only" || name == "cellular") {
        return Architecture::cellular_only;
    }
    if (name == "cell_free_only" || name == "cell_free") {
        return Architecture::cell_free_only;
    }
    throw std::invalid_argument("unknown architecture: " + std::string(name));
}

NetworkConfig apply_architecture(NetworkConfig cfg, Architecture arch)
{
    switch (arch) {
    case Architecture::hybrid:
        break;
    case Architecture::cellular_only:
        cfg.p_a = 0.0;
        break;
    case Architecture::cell_free_only:
        cfg.p_b = 0.0;
        break;
    }
    return cfg;
}

} // namespace hcf
