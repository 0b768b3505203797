#include "hcf/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hcf/analytic.hpp"
#include "hcf/mc_sim.hpp"

namespace hcf::runner {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

double to_double(std::string_view text, std::string_view what)
{
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ConfigError(std::string(what) + ": not a number: '" + std::string(text) + "'");
    }
    return value;
}

template <typename Int>
Int to_integer(std::string_view text, std::string_view what)
{
    text = trim(text);
    Int value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(std::string(what) + ": not an integer: '" + std::string(text) + "'");
    }
    return value;
}

bool to_bool(std::string_view text, std::string_view what)
{
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw ConfigError(std::string(what) + ": not a boolean: '" + std::string(text) + "'");
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed(double v, int decimals)
{
    // Never print "-0.00".
    const double scale = std::pow(10.0, decimals);
    if (std::abs(v) * scale < 0.5) {
        v = 0.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

const std::vector<std::string_view> known_keys = {
    "lambda_b_per_km2", "lambda_b_per_m2", "lambda_a_per_km2", "lambda_a_per_m2", "lambda_u_per_km2",
    "lambda_u_per_m2",  "radius_m",        "n_b",              "n_a",             "p_b_db",
    "p_b",              "p_a_over_p_b",    "p_a",              "alpha1",          "alpha2",
    "carrier_hz",       "beta0",           "delta0",           "noise",           "min_distance_m",
    "thresholds_db",    "architectures",   "methods",          "n_drops",         "n_fading",
    "seed",             "workers",         "max_order",        "output_dir",      "gnuplot",
};

void exclusive(const std::map<std::string, std::string, std::less<>>& kv, std::string_view a, std::string_view b)
{
    if (kv.contains(a) && kv.contains(b)) {
        throw ConfigError("config sets both " + std::string(a) + " and " + std::string(b));
    }
}

std::string network_text(const NetworkConfig& c)
{
    std::string out;
    auto line = [&](std::string_view key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    line("lambda_b_per_m2", num(c.lambda_b));
    line("lambda_a_per_m2", num(c.lambda_a));
    line("lambda_u_per_m2", num(c.lambda_u));
    line("radius_m", num(c.radius));
    line("n_b", std::to_string(c.n_b));
    line("n_a", std::to_string(c.n_a));
    line("p_b", num(c.p_b));
    line("p_a", num(c.p_a));
    line("alpha1", num(c.alpha1));
    line("alpha2", num(c.alpha2));
    line("beta0", num(c.beta0));
    line("delta0", num(c.delta0));
    line("noise", num(c.noise));
    line("min_distance_m", num(c.min_distance));
    return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& fmt)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += fmt(items[i]);
    }
    return out;
}

std::string threshold_text(const std::vector<double>& t)
{
    return join(t, [](double v) { return num(v); });
}

void write_file(const fs::path& path, const std::string& content, std::vector<fs::path>& created)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    created.push_back(path);
    out << content;
    out.close();
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

std::string gnuplot_text(const std::vector<CoverageCurve>& curves)
{
    std::string out = "# threshold_db";
    for (const auto& c : curves) {
        out += ' ';
        out += c.label;
    }
    out += '\n';
    const std::size_t n = curves.empty() ? 0 : curves.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        out += fixed(curves.front().thresholds_db[i], 2);
        for (const auto& c : curves) {
            out += ' ';
            out += fixed(c.probabilities[i], 6);
        }
        out += '\n';
    }
    return out;
}

} // namespace

std::string_view to_string(Method method)
{
    switch (method) {
    case Method::mc_exact:
        return "mc_exact";
    case Method::mc_decomposed:
        return "mc_decomposed";
    case Method::analytic:
        return "analytic";
    }
    return "unknown";
}

Method parse_method(std::string_view name)
{
    name = trim(name);
    if (name == "mc_exact") {
        return Method::mc_exact;
    }
    if (name == "mc_decomposed") {
        return Method::mc_decomposed;
    }
    if (name == "analytic") {
        return Method::analytic;
    }
    throw ConfigError("unknown method: " + std::string(name));
}

std::vector<double> parse_threshold_range(std::string_view text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw ConfigError("threshold range must be A:B:STEP, got '" + std::string(text) + "'");
    }
    const double a = to_double(parts[0], "threshold start");
    const double b = to_double(parts[1], "threshold stop");
    const double step = to_double(parts[2], "threshold step");
    try {
        return threshold_grid_db(a, b, step);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::vector<Architecture> parse_architecture_list(std::string_view text)
{
    std::vector<Architecture> out;
    for (const auto part : split(text, ',')) {
        try {
            out.push_back(parse_architecture(part));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return out;
}

std::vector<Method> parse_method_list(std::string_view text)
{
    std::vector<Method> out;
    for (const auto part : split(text, ',')) {
        out.push_back(parse_method(part));
    }
    return out;
}

ExperimentSpec parse_experiment(std::string_view text, const ExperimentSpec& base)
{
    std::map<std::string, std::string, std::less<>> kv;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = trim(line.substr(0, hash));
        }
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }
    exclusive(kv, "lambda_b_per_km2", "lambda_b_per_m2");
    exclusive(kv, "lambda_a_per_km2", "lambda_a_per_m2");
    exclusive(kv, "lambda_u_per_km2", "lambda_u_per_m2");
    exclusive(kv, "p_b_db", "p_b");
    exclusive(kv, "p_a_over_p_b", "p_a");

    ExperimentSpec spec = base;
    NetworkConfig& c = spec.config;
    auto get = [&](std::string_view key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto density = [&](std::string_view km2, std::string_view m2, double& field) {
        if (const auto* v = get(km2)) {
            field = to_double(*v, km2) / 1e6;
        } else if (const auto* w = get(m2)) {
            field = to_double(*w, m2);
        }
    };
    density("lambda_b_per_km2", "lambda_b_per_m2", c.lambda_b);
    density("lambda_a_per_km2", "lambda_a_per_m2", c.lambda_a);
    density("lambda_u_per_km2", "lambda_u_per_m2", c.lambda_u);
    if (const auto* v = get("radius_m")) {
        c.radius = to_double(*v, "radius_m");
    }
    if (const auto* v = get("n_b")) {
        c.n_b = to_integer<int>(*v, "n_b");
    }
    if (const auto* v = get("n_a")) {
        c.n_a = to_integer<int>(*v, "n_a");
    }
    if (const auto* v = get("p_b_db")) {
        c.p_b = db_to_linear(to_double(*v, "p_b_db"));
    } else if (const auto* w = get("p_b")) {
        c.p_b = to_double(*w, "p_b");
    }
    if (const auto* v = get("p_a_over_p_b")) {
        c.p_a = to_double(*v, "p_a_over_p_b") * c.p_b;
    } else if (const auto* w = get("p_a")) {
        c.p_a = to_double(*w, "p_a");
    }
    if (const auto* v = get("alpha1")) {
        c.alpha1 = to_double(*v, "alpha1");
    }
    if (const auto* v = get("alpha2")) {
        c.alpha2 = to_double(*v, "alpha2");
    }
    if (const auto* v = get("carrier_hz")) {
        const double f = to_double(*v, "carrier_hz");
        if (!(f > 0.0)) {
            throw ConfigError("carrier_hz must be positive");
        }
        c.beta0 = c.delta0 = free_space_reference_gain(f);
    }
    if (const auto* v = get("beta0")) {
        c.beta0 = to_double(*v, "beta0");
    }
    if (const auto* v = get("delta0")) {
        c.delta0 = to_double(*v, "delta0");
    }
    if (const auto* v = get("noise")) {
        c.noise = to_double(*v, "noise");
    }
    if (const auto* v = get("min_distance_m")) {
        c.min_distance = to_double(*v, "min_distance_m");
    }

    if (const auto* v = get("thresholds_db")) {
        if (v->find(':') != std::string::npos) {
            spec.thresholds_db = parse_threshold_range(*v);
        } else {
            spec.thresholds_db.clear();
            for (const auto part : split(*v, ',')) {
                spec.thresholds_db.push_back(to_double(part, "thresholds_db"));
            }
        }
    }
    if (const auto* v = get("architectures")) {
        spec.architectures = parse_architecture_list(*v);
    }
    if (const auto* v = get("methods")) {
        spec.methods = parse_method_list(*v);
    }
    if (const auto* v = get("n_drops")) {
        spec.n_drops = to_integer<int>(*v, "n_drops");
    }
    if (const auto* v = get("n_fading")) {
        spec.n_fading = to_integer<int>(*v, "n_fading");
    }
    if (const auto* v = get("seed")) {
        spec.seed = to_integer<std::uint64_t>(*v, "seed");
    }
    if (const auto* v = get("workers")) {
        spec.workers = to_integer<int>(*v, "workers");
    }
    if (const auto* v = get("max_order")) {
        spec.max_order = to_integer<int>(*v, "max_order");
    }
    if (const auto* v = get("output_dir")) {
        spec.output_dir = *v;
    }
    if (const auto* v = get("gnuplot")) {
        spec.gnuplot = to_bool(*v, "gnuplot");
    }
    return spec;
}

ExperimentSpec load_experiment(const fs::path& path, const ExperimentSpec& base)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_experiment(text.str(), base);
}

std::string canonical_inputs(const ExperimentSpec& spec)
{
    std::string out = network_text(spec.config);
    out += "thresholds_db = " + threshold_text(spec.thresholds_db) + '\n';
    out += "architectures = " + join(spec.architectures, [](Architecture a) { return std::string(to_string(a)); }) + '\n';
    out += "methods = " + join(spec.methods, [](Method m) { return std::string(to_string(m)); }) + '\n';
    out += "n_drops = " + std::to_string(spec.n_drops) + '\n';
    out += "n_fading = " + std::to_string(spec.n_fading) + '\n';
    out += "max_order = " + std::to_string(spec.max_order) + '\n';
    return out;
}

std::string serialize_experiment(const ExperimentSpec& spec)
{
    std::string out = canonical_inputs(spec);
    out += "seed = " + std::to_string(spec.seed) + '\n';
    out += "workers = " + std::to_string(spec.workers) + '\n';
    out += "output_dir = " + spec.output_dir.string() + '\n';
    out += std::string("gnuplot = ") + (spec.gnuplot ? "true" : "false") + '\n';
    return out;
}

std::uint64_t config_hash(const ExperimentSpec& spec)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char ch : canonical_inputs(spec)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<std::string> validate(const ExperimentSpec& spec)
{
    std::vector<std::string> bad = hcf::validate(spec.config);
    auto check = [&](bool ok, const char* rule) {
        if (!ok) {
            bad.emplace_back(rule);
        }
    };
    check(!spec.thresholds_db.empty(), "thresholds_nonempty");
    check(std::adjacent_find(spec.thresholds_db.begin(), spec.thresholds_db.end(),
                             [](double a, double b) { return !(a < b); }) == spec.thresholds_db.end(),
          "thresholds_strictly_increasing");
    check(!spec.architectures.empty(), "architectures_nonempty");
    check(!spec.methods.empty(), "methods_nonempty");
    check(spec.n_drops >= 1, "n_drops_ge_1");
    check(spec.n_fading >= 1, "n_fading_ge_1");
    check(spec.workers >= 1, "workers_ge_1");
    check(spec.max_order >= 1, "max_order_ge_1");
    return bad;
}

std::optional<std::uint64_t> seed_from_env(const char* name)
{
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    return to_integer<std::uint64_t>(raw, name);
}

std::string curve_file_name(Architecture arch, Method method)
{
    return std::string(to_string(arch)) + "_" + std::string(to_string(method)) + ".csv";
}

std::string format_curve_csv(const CoverageCurve& curve)
{
    std::string out = "threshold_db,coverage,stderr\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        out += fixed(curve.thresholds_db[i], 2);
        out += ',';
        out += fixed(curve.probabilities[i], 6);
        out += ',';
        out += fixed(i < curve.stderrs.size() ? curve.stderrs[i] : 0.0, 6);
        out += '\n';
    }
    return out;
}

CoverageCurve parse_curve_csv(std::string_view text, std::string label)
{
    CoverageCurve curve;
    curve.label = std::move(label);
    bool header = true;
    for (const auto line : split(text, '\n')) {
        if (line.empty()) {
            continue;
        }
        if (header) {
            if (line != "threshold_db,coverage,stderr") {
                throw ConfigError("unexpected CSV header: '" + std::string(line) + "'");
            }
            header = false;
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 3) {
            throw ConfigError("CSV row needs 3 columns: '" + std::string(line) + "'");
        }
        curve.thresholds_db.push_back(to_double(cells[0], "threshold_db"));
        curve.probabilities.push_back(to_double(cells[1], "coverage"));
        curve.stderrs.push_back(to_double(cells[2], "stderr"));
    }
    if (header) {
        throw ConfigError("empty CSV");
    }
    return curve;
}

CoverageCurve read_curve_csv(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_curve_csv(text.str(), path.stem().string());
}

RunResult run(const ExperimentSpec& spec)
{
    if (auto bad = validate(spec); !bad.empty()) {
        throw ValidationError(std::move(bad));
    }
    const auto started = std::chrono::steady_clock::now();

    RunResult result;
    result.config_hash = config_hash(spec);
    std::vector<fs::path> created;
    const bool dir_existed = fs::exists(spec.output_dir);

    try {
        fs::create_directories(spec.output_dir);
        const bool wants_mc = std::any_of(spec.methods.begin(), spec.methods.end(),
                                          [](Method m) { return m != Method::analytic; });
        for (const Architecture arch : spec.architectures) {
            const NetworkConfig cfg = apply_architecture(spec.config, arch);
            const DerivedParams derived = derive(cfg);
            SimRun sim;
            if (wants_mc) {
                sim = run_monte_carlo(cfg, derived, SimOptions{spec.n_drops, spec.n_fading, spec.seed, spec.workers});
            }
            for (const Method method : spec.methods) {
                const std::string label = std::string(to_string(arch)) + "_" + std::string(to_string(method));
                CoverageCurve curve;
                switch (method) {
                case Method::mc_exact:
                    curve = exact_curve(sim, spec.thresholds_db, label);
                    break;
                case Method::mc_decomposed:
                    curve = decomposed_curve(sim, spec.thresholds_db, label);
                    break;
                case Method::analytic: {
                    analytic::AnalyticOptions opts;
                    opts.max_order = spec.max_order;
                    analytic::AnalyticStats stats;
                    curve = analytic::coverage_curve(spec.thresholds_db, cfg, derived, label, opts, &stats);
                    result.analytic_clamped += stats.clamped;
                    result.analytic_evaluations += stats.evaluations;
                    break;
                }
                }
                const fs::path path = spec.output_dir / curve_file_name(arch, method);
                write_file(path, format_curve_csv(curve), created);
                result.curves.push_back(std::move(curve));
            }
        }
        if (spec.gnuplot) {
            write_file(spec.output_dir / "coverage.dat", gnuplot_text(result.curves), created);
        }

        result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        char hash_hex[19];
        std::snprintf(hash_hex, sizeof hash_hex, "%016llx", static_cast<unsigned long long>(result.config_hash));

        nlohmann::ordered_json manifest;
        manifest["tool"] = "hcf";
        manifest["tool_version"] = tool_version;
        manifest["config_hash"] = hash_hex;
        manifest["seed"] = spec.seed;
        manifest["wall_time_s"] = result.wall_time_s;
        manifest["workers"] = spec.workers;
        manifest["n_drops"] = spec.n_drops;
        manifest["n_fading"] = spec.n_fading;
        manifest["architectures"] = nlohmann::json::array();
        for (const auto a : spec.architectures) {
            manifest["architectures"].push_back(to_string(a));
        }
        manifest["methods"] = nlohmann::json::array();
        for (const auto m : spec.methods) {
            manifest["methods"].push_back(to_string(m));
        }
        manifest["thresholds_db"] = spec.thresholds_db;
        manifest["analytic_evaluations"] = result.analytic_evaluations;
        manifest["analytic_clamped"] = result.analytic_clamped;
        manifest["files"] = nlohmann::json::array();
        for (const auto& p : created) {
            manifest["files"].push_back(p.filename().string());
        }
        manifest["config"] = serialize_experiment(spec);
        write_file(spec.output_dir / "manifest.json", manifest.dump(2) + "\n", created);
    } catch (...) {
        std::error_code ec;
        for (const auto& p : created) {
            fs::remove(p, ec);
        }
        if (!dir_existed) {
            fs::remove(spec.output_dir, ec); // only succeeds if empty
        }
        throw;
    }
    result.files = created;
    return result;
}

CompareReport compare(const CoverageCurve& a, const CoverageCurve& b)
{
    if (a.size() != b.size() || a.size() == 0) {
        throw GridMismatch("compare: threshold grids differ in length or are empty");
    }
    CompareReport report;
    report.label_a = a.label;
    report.label_b = b.label;
    report.points = a.size();
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a.thresholds_db[i] - b.thresholds_db[i]) > 1e-9) {
            throw GridMismatch("compare: threshold " + fixed(a.thresholds_db[i], 2) + " dB vs " +
                               fixed(b.thresholds_db[i], 2) + " dB");
        }
        const double gap = std::abs(a.probabilities[i] - b.probabilities[i]);
        total += gap;
        if (gap > report.max_gap || i == 0) {
            report.max_gap = gap;
            report.worst_threshold_db = a.thresholds_db[i];
        }
    }
    report.mean_gap = total / static_cast<double>(a.size());
    return report;
}

std::string to_json(const CompareReport& report)
{
    nlohmann::ordered_json j;
    j["curve_a"] = report.label_a;
    j["curve_b"] = report.label_b;
    j["points"] = report.points;
    j["max_gap"] = report.max_gap;
    j["mean_gap"] = report.mean_gap;
    j["worst_threshold_db"] = report.worst_threshold_db;
    return j.dump(2) + "\n";
}

std::string to_text(const CompareReport& report)
{
    return report.label_a + " vs " + report.label_b + ": max gap " + fixed(report.max_gap, 6) + " at " +
           fixed(report.worst_threshold_db, 2) + " dB, mean gap " + fixed(report.mean_gap, 6) + " over " +
           std::to_string(report.points) + " thresholds\n";
}

} // namespace hcf::runner
