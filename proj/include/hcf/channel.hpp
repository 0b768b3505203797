#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "hcf/rng.hpp"

namespace hcf {

/// Small-scale fading vector, one entry per antenna, i.i.d. CN(0, 1).
struct FadingVector {
    std::vector<std::complex<double>> entries;

    [[nodiscard]] std::size_t size() const { return entries.size(); }
    [[nodiscard]] double squared_norm() const;
};

FadingVector sample_fading(int n, Rng& rng);

/// Fills re/im with independent N(0, 1/2) draws, i.e. CN(0, 1) entries.
void fill_complex_gaussian(std::span<double> re, std::span<double> im, Rng& rng);

/// |target^H served / ||served|| |^2.
double bf_projection_power(const FadingVector& target, const FadingVector& served);

class DegenerateChannel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Gamma(shape k, scale theta): mean k*theta, so b * Gamma(a, t) ~ Gamma(a, b*t).
double gamma_sample(double shape, double scale, Rng& rng);
double gamma_pdf(double x, double shape, double scale);
double gamma_cdf(double x, double shape, double scale);
double gamma_ccdf(double x, double shape, double scale);

/// sqrt of a Gamma(m, omega/m) draw.
double nakagami_sample(double m, double omega, Rng& rng);
double nakagami_mean(double m, double omega);

/// Density of Y = (X + shift)^2 with X ~ Nakagami(m, omega); zero for y <= shift^2.
double shifted_square_pdf(double y, double m, double omega, double shift);

} // namespace hcf
