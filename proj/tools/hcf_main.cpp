// hcf: coverage experiments for hybrid cellular / cell-free downlinks.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hcf/runner.hpp"

namespace fs = std::filesystem;
using namespace hcf;
using namespace hcf::runner;

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> drops;
    std::optional<int> fading;
    std::string thresholds;
    std::string arch;
    std::string methods;
    std::optional<int> workers;
    std::string out;
    bool gnuplot = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_methods)
{
    cmd->add_option("--config", f.config, "key = value experiment file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "RNG seed (overrides config and $" + std::string(seed_env_var) + ")");
    cmd->add_option("--drops", f.drops, "network drops");
    cmd->add_option("--fading", f.fading, "fading realisations per drop");
    cmd->add_option("--thresholds-db", f.thresholds, "threshold grid A:B:STEP in dB");
    cmd->add_option("--arch", f.arch, "comma list of hybrid, cellular_only, cell_free_only");
    if (with_methods) {
        cmd->add_option("--methods", f.methods, "comma list of mc_exact, mc_decomposed, analytic");
    }
    cmd->add_option("--workers", f.workers, "worker threads");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_flag("--gnuplot", f.gnuplot, "also write coverage.dat");
}

ExperimentSpec build_spec(const CommonFlags& f)
{
    ExperimentSpec spec;
    if (!f.config.empty()) {
        spec = load_experiment(f.config, spec);
    }
    if (auto env = seed_from_env()) {
        spec.seed = *env;
    }
    if (f.seed) {
        spec.seed = *f.seed;
    }
    if (f.drops) {
        spec.n_drops = *f.drops;
    }
    if (f.fading) {
        spec.n_fading = *f.fading;
    }
    if (!f.thresholds.empty()) {
        spec.thresholds_db = parse_threshold_range(f.thresholds);
    }
    if (!f.arch.empty()) {
        spec.architectures = parse_architecture_list(f.arch);
    }
    if (!f.methods.empty()) {
        spec.methods = parse_method_list(f.methods);
    }
    if (f.workers) {
        spec.workers = *f.workers;
    }
    if (!f.out.empty()) {
        spec.output_dir = f.out;
    }
    spec.gnuplot = spec.gnuplot || f.gnuplot;
    return spec;
}

int execute(const ExperimentSpec& spec)
{
    const RunResult result = run(spec);
    for (const auto& c : result.curves) {
        std::printf("wrote %s (%zu thresholds)\n", (c.label + ".csv").c_str(), c.size());
    }
    std::printf("config hash %016llx, seed %llu, %.2f s\n", static_cast<unsigned long long>(result.config_hash),
                static_cast<unsigned long long>(spec.seed), result.wall_time_s);
    if (result.analytic_clamped > 0) {
        std::printf("analytic: %zu of %zu conditional evaluations clamped to [0,1]\n", result.analytic_clamped,
                    result.analytic_evaluations);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coverage of hybrid cellular / cell-free downlinks"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    CommonFlags sim_flags;
    CommonFlags ana_flags;
    CommonFlags sweep_flags;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage curves");
    auto* analyze = app.add_subcommand("analyze", "closed-form coverage curves");
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo and analytic curves for every architecture");
    add_common(simulate, sim_flags, true);
    add_common(analyze, ana_flags, false);
    add_common(sweep, sweep_flags, true);

    std::string curve_a;
    std::string curve_b;
    bool json = false;
    std::string compare_out;
    auto* cmp = app.add_subcommand("compare", "gap between two coverage CSV files");
    cmp->add_option("curve_a", curve_a, "first CSV")->required()->check(CLI::ExistingFile);
    cmp->add_option("curve_b", curve_b, "second CSV")->required()->check(CLI::ExistingFile);
    cmp->add_flag("--json", json, "print the machine-readable report");
    cmp->add_option("--out", compare_out, "also write compare.json into this directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            ExperimentSpec spec = build_spec(sim_flags);
            if (sim_flags.methods.empty()) {
                spec.methods = {Method::mc_exact, Method::mc_decomposed};
            }
            for (const Method m : spec.methods) {
                if (m == Method::analytic) {
                    throw ConfigError("simulate: use analyze or sweep for the analytic method");
                }
            }
            return execute(spec);
        }
        if (analyze->parsed()) {
            ExperimentSpec spec = build_spec(ana_flags);
            spec.methods = {Method::analytic};
            return execute(spec);
        }
        if (sweep->parsed()) {
            return execute(build_spec(sweep_flags));
        }
        const CompareReport report = compare(read_curve_csv(curve_a), read_curve_csv(curve_b));
        std::cout << (json ? to_json(report) : to_text(report));
        if (!compare_out.empty()) {
            fs::create_directories(compare_out);
            std::FILE* f = std::fopen((fs::path(compare_out) / "compare.json").c_str(), "wb");
            if (f == nullptr) {
                throw std::runtime_error("cannot write compare.json");
            }
            const std::string text = to_json(report);
            std::fwrite(text.data(), 1, text.size(), f);
            std::fclose(f);
        }
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: invalid configuration, violated rules:";
        for (const auto& rule : e.rules()) {
            std::cerr << ' ' << rule;
        }
        std::cerr << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
