#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference and,
// on x86-64, an AVX2/FMA variant compiled in its own translation unit. The
// active table is picked once at first use from CPUID; HCF_SIMD=scalar in the
// environment forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace hcf::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Complex channel block stored structure-of-arrays: antenna a of link j is
/// at index a * links + j.
struct ComplexBlock {
    std::span<const double> re;
    std::span<const double> im;
    std::size_t links = 0;
    int antennas = 0;
};

struct ProjectionSums {
    double re = 0.0;    ///< Re sum_j g_j^H x_j / ||x_j||
    double im = 0.0;    ///< Im of the same
    double power = 0.0; ///< sum_j |g_j^H x_j / ||x_j|| |^2
};

struct KernelTable {
    Isa isa;

    /// Conjugate-beamforming projections of `target` onto the normalised
    /// directions of `served`, summed over links.
    ProjectionSums (*projection_sums)(const ComplexBlock& target, const ComplexBlock& served);

    /// sum_j scale[j] * ||x_j||.
    double (*scaled_norm_sum)(std::span<const double> scale, const ComplexBlock& x);

    /// out[i] = sum_n coef[n] * u[n]^i for i = 0 .. out.size()-1.
    void (*power_sums)(std::span<const double> coef, std::span<const double> u, std::span<double> out);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant is not built for this target.
const KernelTable* avx2_kernels();

bool cpu_supports(Isa isa);

/// Best table supported by the running CPU, unless HCF_SIMD=scalar.
const KernelTable& active_kernels();

} // namespace hcf::simd
