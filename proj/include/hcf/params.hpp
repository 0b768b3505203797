#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hcf {

/// Primitive model parameters. Everything is SI: lengths in metres,
/// densities per square metre. Powers are normalised to the noise power.
struct NetworkConfig {
    double lambda_b = 0.0; ///< BS density
    double lambda_a = 0.0; ///< AP density
    double lambda_u = 0.0; ///< UE density
    int n_b = 1;           ///< BS antennas
    int n_a = 1;           ///< AP antennas
    double p_b = 0.0;      ///< BS transmit power / noise
    double p_a = 0.0;      ///< AP transmit power / noise
    double alpha1 = 0.0;   ///< BS path-loss exponent
    double alpha2 = 0.0;   ///< AP path-loss exponent
    double beta0 = 0.0;    ///< BS path gain at 1 m
    double delta0 = 0.0;   ///< AP path gain at 1 m
    double radius = 0.0;   ///< network disk radius
    double noise = 1.0;
    double min_distance = 1e-3; ///< distances below this are clamped in the simulator

    [[nodiscard]] double area() const;

    bool operator==(const NetworkConfig&) const = default;
};

/// Quantities derived once from a NetworkConfig.
struct DerivedParams {
    double eta_b = 0.0;
    double eta_a = 0.0;
    double rho_b = 0.0;
    double rho_a = 0.0;
    double phi_bar_b = 0.0; ///< mean users per BS, real-valued
    double u_bar = 0.0;     ///< mean UE count in the disk
    double l_a = 0.0;       ///< mean AP signal amplitude (Campbell mean)
    double i_a_bar = 0.0;   ///< mean AP interference power (Campbell mean)
};

class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> rules);

    [[nodiscard]] const std::vector<std::string>& rules() const { return rules_; }

private:
    std::vector<std::string> rules_;
};

/// Names of every violated rule; empty when the config is usable.
std::vector<std::string> validate(const NetworkConfig& cfg);

/// Throws ValidationError listing all violations.
DerivedParams derive(const NetworkConfig& cfg);

/// Mean AP signal amplitude. Needs rho_a in `partial`; alpha2 < 4.
double mean_ap_signal(const NetworkConfig& cfg, const DerivedParams& partial);

/// Mean AP interference power. Needs rho_a and u_bar in `partial`; alpha2 < 2.
double mean_ap_interference(const NetworkConfig& cfg, const DerivedParams& partial);

/// Free-space path gain at 1 m, (c / 4 pi f)^2.
double free_space_reference_gain(double carrier_hz);

inline constexpr double speed_of_light = 3e8;

/// The reference deployment: 40/200/160 per km^2, alpha 2.7/1.8,
/// P_B = 130 dB over noise, P_A = 3e-5 P_B, 4/2 antennas, 3.5 GHz, 500 m disk.
NetworkConfig reference_config();

enum class Architecture { hybrid, cellular_only, cell_free_only };

std::string_view to_string(Architecture arch);
Architecture parse_architecture(std::string_view name);

/// cellular_only zeroes p_a; cell_free_only zeroes p_b (the simulator then
/// skips the BS layer entirely).
NetworkConfig apply_architecture(NetworkConfig cfg, Architecture arch);

} // namespace hcf
