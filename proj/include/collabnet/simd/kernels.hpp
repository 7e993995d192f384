#pragma once

// Data-parallel inner loops shared by the metrics and mixed-model code.
//
// Each kernel has a scalar reference implementation and an AVX2 variant; the
// active variant is picked once from CPUID and can be overridden for tests.
// Both variants reduce floating-point sums in the same fixed order (four
// interleaved partial sums, combined pairwise, then a sequential tail) and the
// AVX2 unit is compiled without FMA contraction, so results are bit-identical
// across variants.

#include <cstdint>
#include <span>
#include <string_view>

namespace collabnet::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Throws std::invalid_argument if `isa` is not available on this CPU.
void set_active_isa(Isa isa);

/// popcount(a & b) over equal-length bitsets.
std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// sum_i w[i] * x[i] * y[i]
double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y);

/// out[i] = psi / (1 + sizes[i] * psi)
void shrinkage_weights(std::span<const double> sizes, double psi, std::span<double> out);

namespace scalar {
std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y);
void shrinkage_weights(std::span<const double> sizes, double psi, std::span<double> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define COLLABNET_HAVE_AVX2_KERNELS 1
namespace avx2 {
std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y);
void shrinkage_weights(std::span<const double> sizes, double psi, std::span<double> out);
}  // namespace avx2
#else
#define COLLABNET_HAVE_AVX2_KERNELS 0
#endif

}  // namespace collabnet::simd
