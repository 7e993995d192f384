#include <atomic>
#include <stdexcept>
#include <string>

#include "collabnet/simd/kernels.hpp"

namespace collabnet::simd {

namespace {

struct KernelTable {
    Isa isa;
    std::uint64_t (*and_popcount)(std::span<const std::uint64_t>, std::span<const std::uint64_t>);
    double (*weighted_dot)(std::span<const double>, std::span<const double>, std::span<const double>);
    void (*shrinkage_weights)(std::span<const double>, double, std::span<double>);
};

constexpr KernelTable kScalar{Isa::Scalar, scalar::and_popcount, scalar::weighted_dot, scalar::shrinkage_weights};
#if COLLABNET_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2{Isa::Avx2, avx2::and_popcount, avx2::weighted_dot, avx2::shrinkage_weights};
#endif

const KernelTable* detect() {
#if COLLABNET_HAVE_AVX2_KERNELS
    if (isa_available(Isa::Avx2)) return &kAvx2;
#endif
    return &kScalar;
}

std::atomic<const KernelTable*>& active() {
    static std::atomic<const KernelTable*> table{detect()};
    return table;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
    if (isa == Isa::Scalar) return true;
#if COLLABNET_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
    static const bool has_avx2 = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
    return has_avx2;
#else
    return false;
#endif
}

Isa active_isa() { return active().load()->isa; }

void set_active_isa(Isa isa) {
    if (!isa_available(isa)) throw std::invalid_argument("ISA not available: " + std::string(isa_name(isa)));
#if COLLABNET_HAVE_AVX2_KERNELS
    active().store(isa == Isa::Avx2 ? &kAvx2 : &kScalar);
#else
    active().store(&kScalar);
#endif
}

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    return active().load()->and_popcount(a, b);
}

double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
    return active().load()->weighted_dot(w, x, y);
}

void shrinkage_weights(std::span<const double> sizes, double psi, std::span<double> out) {
    active().load()->shrinkage_weights(sizes, psi, out);
}

}  // namespace collabnet::simd
