#include "hcf/coverage_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hcf {

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear)
{
    return 10.0 * std::log10(linear);
}

CoverageCurve empirical_curve(const std::vector<double>& sinr, const std::vector<double>& thresholds_db,
                              std::string label)
{
    if (sinr.empty()) {
        throw std::invalid_argument("empirical_curve: no samples");
    }
    std::vector<double> sorted = sinr;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    CoverageCurve curve;
    curve.label = std::move(label);
    curve.thresholds_db = thresholds_db;
    curve.probabilities.reserve(thresholds_db.size());
    curve.stderrs.reserve(thresholds_db.size());
    for (const double t_db : thresholds_db) {
        const double t = db_to_linear(t_db);
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
        const double p = static_cast<double>(above) / n;
        curve.probabilities.push_back(p);
        curve.stderrs.push_back(std::sqrt(p * (1.0 - p) / n));
    }
    return curve;
}

std::vector<double> threshold_grid_db(double start, double stop, double step)
{
    if (!(step > 0.0) || stop < start) {
        throw std::invalid_argument("threshold grid needs step > 0 and stop >= start");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid[k] = start + static_cast<double>(k) * step;
    }
    return grid;
}

} // namespace hcf
