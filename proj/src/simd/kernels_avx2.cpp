// Built with -mavx2 -mpopcnt -ffp-contract=off; only entered after a CPUID check.

#include <immintrin.h>

#include <cstddef>

#include "collabnet/simd/kernels.hpp"

namespace collabnet::simd::avx2 {

namespace {

// Nibble-LUT popcount per byte, summed into four 64-bit lanes.
inline __m256i popcount_epi64(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

}  // namespace

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    const std::size_t n = a.size();
    const std::size_t body = n - n % 4;
    __m256i acc = _mm256_setzero_si256();
    for (std::size_t i = 0; i < body; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
        acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_and_si256(va, vb)));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (std::size_t i = body; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & b[i]));
    return total;
}

double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
    const std::size_t n = w.size();
    const std::size_t body = n - n % 4;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < body; i += 4) {
        __m256d p = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(x.data() + i));
        p = _mm256_mul_pd(p, _mm256_loadu_pd(y.data() + i));
        acc = _mm256_add_pd(acc, p);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (std::size_t i = body; i < n; ++i) {
        double p = w[i] * x[i];
        p = p * y[i];
        total = total + p;
    }
    return total;
}

void shrinkage_weights(std::span<const double> sizes, double psi, std::span<double> out) {
    const std::size_t n = sizes.size();
    const std::size_t body = n - n % 4;
    const __m256d vpsi = _mm256_set1_pd(psi);
    const __m256d one = _mm256_set1_pd(1.0);
    for (std::size_t i = 0; i < body; i += 4) {
        __m256d denom = _mm256_add_pd(one, _mm256_mul_pd(_mm256_loadu_pd(sizes.data() + i), vpsi));
        _mm256_storeu_pd(out.data() + i, _mm256_div_pd(vpsi, denom));
    }
    for (std::size_t i = body; i < n; ++i) {
        double denom = sizes[i] * psi;
        denom = 1.0 + denom;
        out[i] = psi / denom;
    }
}

}  // namespace collabnet::simd::avx2
