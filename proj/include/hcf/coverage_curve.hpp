#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hcf {

double db_to_linear(double db);
double linear_to_db(double linear);

/// P[SINR > T] sampled on a threshold grid.
struct CoverageCurve {
    std::vector<double> thresholds_db;
    std::vector<double> probabilities;
    std::vector<double> stderrs; ///< zero for analytic curves
    std::string label;

    [[nodiscard]] std::size_t size() const { return thresholds_db.size(); }
    [[nodiscard]] double threshold(std::size_t i) const { return db_to_linear(thresholds_db[i]); }
};

/// Empirical coverage from SINR samples: fraction strictly above each threshold,
/// with binomial standard error sqrt(p (1 - p) / n).
CoverageCurve empirical_curve(const std::vector<double>& sinr, const std::vector<double>& thresholds_db,
                              std::string label);

/// Inclusive grid start, start + step, ..., stop (stop included when it lies on the grid).
std::vector<double> threshold_grid_db(double start, double stop, double step);

} // namespace hcf
