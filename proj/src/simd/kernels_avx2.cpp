#include "hcf/simd/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define HCF_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#include <cmath>
#include <vector>
#endif

namespace hcf::simd {

#ifdef HCF_HAVE_AVX2_KERNELS

namespace {

// The translation unit is built for the baseline ISA; only these functions are
// compiled for AVX2/FMA, so nothing else here can leak wider instructions.
#define HCF_AVX2 __attribute__((target("avx2,fma")))

HCF_AVX2 inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

HCF_AVX2 ProjectionSums projection_sums_avx2(const ComplexBlock& target, const ComplexBlock& served)
{
    const std::size_t n = served.links;
    const int antennas = served.antennas;
    const double* gr = target.re.data();
    const double* gi = target.im.data();
    const double* xr = served.re.data();
    const double* xi = served.im.data();

    __m256d sum_re = _mm256_setzero_pd();
    __m256d sum_im = _mm256_setzero_pd();
    __m256d sum_pow = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);

    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d dot_re = _mm256_setzero_pd();
        __m256d dot_im = _mm256_setzero_pd();
        __m256d norm2 = _mm256_setzero_pd();
        for (int a = 0; a < antennas; ++a) {
            const std::size_t k = static_cast<std::size_t>(a) * n + j;
            const __m256d g_r = _mm256_loadu_pd(gr + k);
            const __m256d g_i = _mm256_loadu_pd(gi + k);
            const __m256d x_r = _mm256_loadu_pd(xr + k);
            const __m256d x_i = _mm256_loadu_pd(xi + k);
            dot_re = _mm256_fmadd_pd(g_r, x_r, dot_re);
            dot_re = _mm256_fmadd_pd(g_i, x_i, dot_re);
            dot_im = _mm256_fmadd_pd(g_r, x_i, dot_im);
            dot_im = _mm256_fnmadd_pd(g_i, x_r, dot_im);
            norm2 = _mm256_fmadd_pd(x_r, x_r, norm2);
            norm2 = _mm256_fmadd_pd(x_i, x_i, norm2);
        }
        const __m256d inv = _mm256_div_pd(one, _mm256_sqrt_pd(norm2));
        const __m256d pr = _mm256_mul_pd(dot_re, inv);
        const __m256d pi = _mm256_mul_pd(dot_im, inv);
        sum_re = _mm256_add_pd(sum_re, pr);
        sum_im = _mm256_add_pd(sum_im, pi);
        sum_pow = _mm256_fmadd_pd(pr, pr, sum_pow);
        sum_pow = _mm256_fmadd_pd(pi, pi, sum_pow);
    }

    ProjectionSums out{hsum(sum_re), hsum(sum_im), hsum(sum_pow)};
    for (; j < n; ++j) {
        double dot_re = 0.0;
        double dot_im = 0.0;
        double norm2 = 0.0;
        for (int a = 0; a < antennas; ++a) {
            const std::size_t k = static_cast<std::size_t>(a) * n + j;
            dot_re += gr[k] * xr[k] + gi[k] * xi[k];
            dot_im += gr[k] * xi[k] - gi[k] * xr[k];
            norm2 += xr[k] * xr[k] + xi[k] * xi[k];
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

HCF_AVX2 double scaled_norm_sum_avx2(std::span<const double> scale, const ComplexBlock& x)
{
    const std::size_t n = x.links;
    const double* s = scale.data();
    const double* xr = x.re.data();
    const double* xi = x.im.data();

    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d norm2 = _mm256_setzero_pd();
        for (int a = 0; a < x.antennas; ++a) {
            const std::size_t k = static_cast<std::size_t>(a) * n + j;
            const __m256d r = _mm256_loadu_pd(xr + k);
            const __m256d i = _mm256_loadu_pd(xi + k);
            norm2 = _mm256_fmadd_pd(r, r, norm2);
            norm2 = _mm256_fmadd_pd(i, i, norm2);
        }
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(s + j), _mm256_sqrt_pd(norm2), acc);
    }
    double total = hsum(acc);
    for (; j < n; ++j) {
        double norm2 = 0.0;
        for (int a = 0; a < x.antennas; ++a) {
            const std::size_t k = static_cast<std::size_t>(a) * n + j;
            norm2 += xr[k] * xr[k] + xi[k] * xi[k];
        }
        total += s[j] * std::sqrt(norm2);
    }
    return total;
}

HCF_AVX2 void power_sums_avx2(std::span<const double> coef, std::span<const double> u, std::span<double> out)
{
    const std::size_t n = coef.size();
    const std::size_t orders = out.size();
    const double* c = coef.data();
    const double* base = u.data();

    std::vector<double> lanes(4 * orders, 0.0);
    double* acc = lanes.data();

    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d term = _mm256_loadu_pd(c + j);
        const __m256d ratio = _mm256_loadu_pd(base + j);
        for (std::size_t i = 0; i < orders; ++i) {
            double* slot = acc + 4 * i;
            _mm256_storeu_pd(slot, _mm256_add_pd(_mm256_loadu_pd(slot), term));
            term = _mm256_mul_pd(term, ratio);
        }
    }

    double* dst = out.data();
    for (std::size_t i = 0; i < orders; ++i) {
        const double* slot = acc + 4 * i;
        dst[i] = (slot[0] + slot[1]) + (slot[2] + slot[3]);
    }
    for (; j < n; ++j) {
        double term = c[j];
        for (std::size_t i = 0; i < orders; ++i) {
            dst[i] += term;
            term *= base[j];
        }
    }
}

#undef HCF_AVX2

constexpr KernelTable table{
    Isa::avx2,
    &projection_sums_avx2,
    &scaled_norm_sum_avx2,
    &power_sums_avx2,
};

} // namespace

const KernelTable* avx2_kernels()
{
    return &table;
}

#else

const KernelTable* avx2_kernels()
{
    return nullptr;
}

#endif

} // namespace hcf::simd
