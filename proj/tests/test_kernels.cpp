#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "collabnet/simd/kernels.hpp"

using namespace collabnet::simd;

namespace {

std::vector<double> random_doubles(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

std::vector<std::uint64_t> random_words(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = rng();
    return v;
}

// Bit-at-a-time reference, independent of either variant.
std::uint64_t naive_and_popcount(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int bit = 0; bit < 64; ++bit) c += ((a[i] & b[i]) >> bit) & 1u;
    return c;
}

}  // namespace

TEST_CASE("scalar kernels agree with naive loops") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u, 130u}) {
        auto a = random_words(rng, n), b = random_words(rng, n);
        CHECK(scalar::and_popcount(a, b) == naive_and_popcount(a, b));

        auto w = random_doubles(rng, n, 0.0, 1.0), x = random_doubles(rng, n, -2.0, 2.0),
             y = random_doubles(rng, n, -2.0, 2.0);
        long double ref = 0.0L;
        for (std::size_t i = 0; i < n; ++i) ref += static_cast<long double>(w[i]) * x[i] * y[i];
        CHECK(scalar::weighted_dot(w, x, y) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));

        auto sizes = random_doubles(rng, n, 1.0, 5.0);
        std::vector<double> out(n);
        scalar::shrinkage_weights(sizes, 0.7, out);
        for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(0.7 / (1.0 + sizes[i] * 0.7)));
    }
}

#if COLLABNET_HAVE_AVX2_KERNELS
TEST_CASE("avx2 kernels are bit-identical to scalar") {
    if (!isa_available(Isa::Avx2)) {
        MESSAGE("AVX2 not available on this CPU; skipping");
        return;
    }
    std::mt19937_64 rng(12);
    for (std::size_t n = 0; n < 300; n += (n < 40 ? 1 : 37)) {
        auto a = random_words(rng, n), b = random_words(rng, n);
        CHECK(avx2::and_popcount(a, b) == scalar::and_popcount(a, b));

        auto w = random_doubles(rng, n, 0.0, 1.0), x = random_doubles(rng, n, -1e3, 1e3),
             y = random_doubles(rng, n, -1e-3, 1e3);
        CHECK(avx2::weighted_dot(w, x, y) == scalar::weighted_dot(w, x, y));

        auto sizes = random_doubles(rng, n, 1.0, 50.0);
        std::vector<double> s(n), v(n);
        for (double psi : {0.0, 1e-8, 0.3, 1e6}) {
            scalar::shrinkage_weights(sizes, psi, s);
            avx2::shrinkage_weights(sizes, psi, v);
            CHECK(s == v);
        }
    }
}
#endif

TEST_CASE("dispatch can be pinned to scalar") {
    const Isa before = active_isa();
    set_active_isa(Isa::Scalar);
    CHECK(active_isa() == Isa::Scalar);
    std::vector<std::uint64_t> a{0xFF, 0x0F}, b{0x0F, 0xFF};
    CHECK(and_popcount(a, b) == 8);
    if (isa_available(before)) set_active_isa(before);
    CHECK(isa_name(Isa::Scalar) == "scalar");
}
