#include "hcf/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace hcf::simd {

namespace {

ProjectionSums projection_sums_scalar(const ComplexBlock& target, const ComplexBlock& served)
{
    const std::size_t n = served.links;
    ProjectionSums out;
    for (std::size_t j = 0; j < n; ++j) {
        double dot_re = 0.0;
        double dot_im = 0.0;
        double norm2 = 0.0;
        for (int a = 0; a < served.antennas; ++a) {
            const std::size_t k = static_cast<std::size_t>(a) * n + j;
            const double gr = target.re[k];
            const double gi = target.im[k];
            const double xr = served.re[k];
            const double xi = served.im[k];
            // conj(g) * x
            dot_re += gr * xr + gi * xi;
            dot_im += gr * xi - gi * xr;
            norm2 += xr * xr + xi * xi;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        const double pr = dot_re * inv;
        const double pi = dot_im * inv;
        out.re += pr;
        out.im += pi;
        out.power += pr * pr + pi * pi;
    }
    return out;
}

double scaled_norm_sum_scalar(std::span<const double> scale, const ComplexBlock& x)
{
    const std::size_t n = x.links;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double norm2 = 0.0;
        for (int a = 0; a < x.antennas; ++a) {
            const std::size_t k = static_cast<std::size_t>(a) * n + j;
            norm2 += x.re[k] * x.re[k] + x.im[k] * x.im[k];
        }
        acc += scale[j] * std::sqrt(norm2);
    }
    return acc;
}

void power_sums_scalar(std::span<const double> coef, std::span<const double> u, std::span<double> out)
{
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t n = 0; n < coef.size(); ++n) {
        double term = coef[n];
        for (double& o : out) {
            o += term;
            term *= u[n];
        }
    }
}

constexpr KernelTable table{
    Isa::scalar,
    &projection_sums_scalar,
    &scaled_norm_sum_scalar,
    &power_sums_scalar,
};

} // namespace

const KernelTable& scalar_kernels()
{
    return table;
}

} // namespace hcf::simd
