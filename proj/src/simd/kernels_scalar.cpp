#include <bit>
#include <cstddef>

#include "collabnet/simd/kernels.hpp"

namespace collabnet::simd::scalar {

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) total += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
    return total;
}

double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
    const std::size_t n = w.size();
    const std::size_t body = n - n % 4;
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < body; i += 4)
        for (std::size_t lane = 0; lane < 4; ++lane) {
            double p = w[i + lane] * x[i + lane];
            p = p * y[i + lane];
            acc[lane] = acc[lane] + p;
        }
    double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (std::size_t i = body; i < n; ++i) {
        double p = w[i] * x[i];
        p = p * y[i];
        total = total + p;
    }
    return total;
}

void shrinkage_weights(std::span<const double> sizes, double psi, std::span<double> out) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        double denom = sizes[i] * psi;
        denom = 1.0 + denom;
        out[i] = psi / denom;
    }
}

}  // namespace collabnet::simd::scalar
