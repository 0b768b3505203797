#include "hcf/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "hcf/mathkit.hpp"

namespace hcf {

namespace {

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw math::DomainError(std::string(what) + " must be positive and finite");
    }
}

} // namespace

double FadingVector::squared_norm() const
{
    double acc = 0.0;
    for (const auto& z : entries) {
        acc += std::norm(z);
    }
    return acc;
}

void fill_complex_gaussian(std::span<double> re, std::span<double> im, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
    for (std::size_t i = 0; i < re.size(); ++i) {
        re[i] = normal(rng);
        im[i] = normal(rng);
    }
}

FadingVector sample_fading(int n, Rng& rng)
{
    if (n < 1) {
        throw math::DomainError("sample_fading: antenna count must be >= 1");
    }
    std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
    FadingVector v;
    v.entries.resize(static_cast<std::size_t>(n));
    for (auto& z : v.entries) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = {re, im};
    }
    return v;
}

double bf_projection_power(const FadingVector& target, const FadingVector& served)
{
    if (target.size() != served.size()) {
        throw math::DomainError("bf_projection_power: vector lengths differ");
    }
    const double norm2 = served.squared_norm();
    if (!(norm2 > 0.0)) {
        throw DegenerateChannel("bf_projection_power: served channel has zero norm");
    }
    std::complex<double> dot{};
    for (std::size_t a = 0; a < target.size(); ++a) {
        dot += std::conj(target.entries[a]) * served.entries[a];
    }
    return std::norm(dot) / norm2;
}

double gamma_sample(double shape, double scale, Rng& rng)
{
    require_positive(shape, "gamma shape");
    require_positive(scale, "gamma scale");
    std::gamma_distribution<double> dist(shape, scale);
    return dist(rng);
}

double gamma_pdf(double x, double shape, double scale)
{
    require_positive(shape, "gamma shape");
    require_positive(scale, "gamma scale");
    if (x < 0.0) {
        return 0.0;
    }
    if (x == 0.0) {
        if (shape < 1.0) {
            return std::numeric_limits<double>::infinity();
        }
        return shape == 1.0 ? 1.0 / scale : 0.0;
    }
    const double z = x / scale;
    return std::exp((shape - 1.0) * std::log(z) - z - math::ln_gamma(shape)) / scale;
}

double gamma_cdf(double x, double shape, double scale)
{
    require_positive(shape, "gamma shape");
    require_positive(scale, "gamma scale");
    if (x <= 0.0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    return boost::math::gamma_p(shape, x / scale);
}

double gamma_ccdf(double x, double shape, double scale)
{
    require_positive(shape, "gamma shape");
    require_positive(scale, "gamma scale");
    if (x <= 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    return boost::math::gamma_q(shape, x / scale);
}

double nakagami_sample(double m, double omega, Rng& rng)
{
    require_positive(m, "nakagami m");
    require_positive(omega, "nakagami omega");
    return std::sqrt(gamma_sample(m, omega / m, rng));
}

double nakagami_mean(double m, double omega)
{
    require_positive(m, "nakagami m");
    require_positive(omega, "nakagami omega");
    return math::gamma_ratio_half(m) * std::sqrt(omega / m);
}

double shifted_square_pdf(double y, double m, double omega, double shift)
{
    require_positive(m, "nakagami m");
    require_positive(omega, "nakagami omega");
    if (shift < 0.0) {
        throw math::DomainError("shifted_square_pdf: shift must be >= 0");
    }
    if (y <= shift * shift) {
        return 0.0;
    }
    // X = sqrt(y) - A has the Nakagami density 2 m^m x^(2m-1) e^(-m x^2/w) / (Gamma(m) w^m);
    // dX/dy = y^(-1/2) / 2, so the factor 2 cancels.
    const double root = std::sqrt(y);
    const double x = root - shift;
    const double log_norm = m * std::log(m) - math::ln_gamma(m) - m * std::log(omega);
    return std::exp(log_norm + (2.0 * m - 1.0) * std::log(x) - (m / omega) * x * x) / root;
}

} // namespace hcf
