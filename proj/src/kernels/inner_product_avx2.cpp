#include "mumimo/kernels/inner_product.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define MUMIMO_X86 1
#include <immintrin.h>
#else
#define MUMIMO_X86 0
#endif

namespace mumimo::kernels::avx2 {

#if MUMIMO_X86

bool available() { return __builtin_cpu_supports("avx2"); }

namespace {

__attribute__((target("avx2"))) inline __m256d abs2_four(std::span<const std::complex<double>> x,
                                                         const SoaVectors& b, std::size_t n)
{
    const std::size_t s = b.stride();
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (std::size_t i = 0; i < b.dim(); ++i) {
        const __m256d xr = _mm256_set1_pd(x[i].real());
        const __m256d xi = _mm256_set1_pd(x[i].imag());
        const __m256d yr = _mm256_loadu_pd(b.re() + i * s + n);
        const __m256d yi = _mm256_loadu_pd(b.im() + i * s + n);
        acc_re = _mm256_add_pd(acc_re, _mm256_add_pd(_mm256_mul_pd(xr, yr), _mm256_mul_pd(xi, yi)));
        acc_im = _mm256_add_pd(acc_im, _mm256_sub_pd(_mm256_mul_pd(xr, yi), _mm256_mul_pd(xi, yr)));
    }
    return _mm256_add_pd(_mm256_mul_pd(acc_re, acc_re), _mm256_mul_pd(acc_im, acc_im));
}

} // namespace

__attribute__((target("avx2"))) void abs2_inner_products(std::span<const std::complex<double>> x,
                                                         const SoaVectors& block, std::span<double> out)
{
    const std::size_t count = block.count();
    std::size_t n = 0;
    for (; n + 4 <= count; n += 4) _mm256_storeu_pd(out.data() + n, abs2_four(x, block, n));
    if (n < count) {
        // The padded stride keeps the tail load in bounds.
        alignas(32) double tmp[4];
        _mm256_store_pd(tmp, abs2_four(x, block, n));
        for (std::size_t k = 0; n + k < count; ++k) out[n + k] = tmp[k];
    }
}

__attribute__((target("avx2"))) BestMatch best_match(std::span<const std::complex<double>> x,
                                                     const SoaVectors& block)
{
    const std::size_t count = block.count();
    __m256d best_val = _mm256_set1_pd(-1.0);
    __m256d best_idx = _mm256_setzero_pd();
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d step = _mm256_set1_pd(4.0);
    const __m256d limit = _mm256_set1_pd(static_cast<double>(count));
    for (std::size_t n = 0; n < count; n += 4) {
        __m256d v = abs2_four(x, block, n);
        // Lanes past the end are forced below any real value.
        const __m256d valid = _mm256_cmp_pd(idx, limit, _CMP_LT_OQ);
        v = _mm256_blendv_pd(_mm256_set1_pd(-2.0), v, valid);
        const __m256d better = _mm256_cmp_pd(v, best_val, _CMP_GT_OQ);
        best_val = _mm256_blendv_pd(best_val, v, better);
        best_idx = _mm256_blendv_pd(best_idx, idx, better);
        idx = _mm256_add_pd(idx, step);
    }
    alignas(32) double vals[4];
    alignas(32) double idxs[4];
    _mm256_store_pd(vals, best_val);
    _mm256_store_pd(idxs, best_idx);
    BestMatch best{static_cast<std::size_t>(idxs[0]), vals[0]};
    for (int k = 1; k < 4; ++k) {
        const auto i = static_cast<std::size_t>(idxs[k]);
        if (vals[k] > best.value || (vals[k] == best.value && i < best.index)) best = {i, vals[k]};
    }
    return best;
}

#else

bool available() { return false; }

void abs2_inner_products(std::span<const std::complex<double>> x, const SoaVectors& block, std::span<double> out)
{
    scalar::abs2_inner_products(x, block, out);
}

BestMatch best_match(std::span<const std::complex<double>> x, const SoaVectors& block)
{
    return scalar::best_match(x, block);
}

#endif

} // namespace mumimo::kernels::avx2
