#pragma once

#include <array>
#include <cstdint>

namespace collabnet {

/// Philox4x32-10 (Salmon et al., SC'11). Stateless: each (counter, key) pair
/// maps to four independent 32-bit words.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

    /// Uniform double in [0, 1) from the first 53 bits of the block.
    static constexpr double uniform(const Counter& ctr, const Key& key) {
        const auto w = block(ctr, key);
        const std::uint64_t bits = (std::uint64_t{w[0]} << 21) | (w[1] >> 11);
        return static_cast<double>(bits) * 0x1.0p-53;
    }
};

}  // namespace collabnet
