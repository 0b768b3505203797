#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hcf/coverage_curve.hpp"
#include "hcf/params.hpp"

namespace hcf::runner {

inline constexpr std::string_view tool_version = "0.3.0";
inline constexpr const char* seed_env_var = "HCF_SEED";

enum class Method { mc_exact, mc_decomposed, analytic };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Malformed config text or CLI value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
    NetworkConfig config = reference_config();
    std::vector<double> thresholds_db = threshold_grid_db(-10.0, 30.0, 1.0);
    std::vector<Architecture> architectures{Architecture::hybrid, Architecture::cellular_only,
                                            Architecture::cell_free_only};
    std::vector<Method> methods{Method::mc_exact, Method::mc_decomposed, Method::analytic};
    int n_drops = 1000;
    int n_fading = 5;
    std::uint64_t seed = 1;
    int workers = 1;
    int max_order = 128; ///< analytic series cap
    std::filesystem::path output_dir = "out";
    bool gnuplot = false;
};

/// Flat `key = value` text, `#` starts a comment. Keys carry their units
/// (lambda_b_per_km2, radius_m, ...). Keys absent from the text keep the
/// values of `base`.
ExperimentSpec parse_experiment(std::string_view text, const ExperimentSpec& base = {});
ExperimentSpec load_experiment(const std::filesystem::path& path, const ExperimentSpec& base = {});

/// Canonical text form; parse_experiment(serialize_experiment(s)) == s field by
/// field. Network values are written in SI keys so the round trip is exact.
std::string serialize_experiment(const ExperimentSpec& spec);

/// Canonical text of everything that determines numeric output except the seed.
std::string canonical_inputs(const ExperimentSpec& spec);

/// FNV-1a over canonical_inputs.
std::uint64_t config_hash(const ExperimentSpec& spec);

/// Rule names violated by the spec, including those of the network config.
std::vector<std::string> validate(const ExperimentSpec& spec);

/// Parses "A:B:STEP" into an inclusive dB grid.
std::vector<double> parse_threshold_range(std::string_view text);
std::vector<Architecture> parse_architecture_list(std::string_view text);
std::vector<Method> parse_method_list(std::string_view text);

/// Seed from the environment override, if set.
std::optional<std::uint64_t> seed_from_env(const char* name = seed_env_var);

std::string curve_file_name(Architecture arch, Method method);

/// Header `threshold_db,coverage,stderr`; 2-decimal thresholds, 6-decimal values.
std::string format_curve_csv(const CoverageCurve& curve);
CoverageCurve parse_curve_csv(std::string_view text, std::string label = {});
CoverageCurve read_curve_csv(const std::filesystem::path& path);

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::vector<CoverageCurve> curves; ///< labelled "<arch>_<method>"
    std::uint64_t config_hash = 0;
    double wall_time_s = 0.0;
    std::size_t analytic_clamped = 0;
    std::size_t analytic_evaluations = 0;
};

/// Writes one CSV per (architecture, method), manifest.json and, if asked,
/// coverage.dat for gnuplot. Throws ValidationError before touching the disk
/// on a bad spec; on any later failure every file it created is removed.
RunResult run(const ExperimentSpec& spec);

struct CompareReport {
    double max_gap = 0.0;
    double mean_gap = 0.0;
    double worst_threshold_db = 0.0;
    std::size_t points = 0;
    std::string label_a;
    std::string label_b;
};

class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

CompareReport compare(const CoverageCurve& a, const CoverageCurve& b);
std::string to_json(const CompareReport& report);
std::string to_text(const CompareReport& report);

} // namespace hcf::runner
