#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rsl {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from one root seed, a stage tag and a
/// counter, so every stochastic pipeline stage can be re-run in isolation
/// while all randomness still flows from the single recorded root seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                                 std::uint64_t counter = 0) noexcept {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a offset basis
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return splitmix64(splitmix64(root ^ h) + counter);
}

/// 53-bit uniform draw in [0, 1). std::uniform_real_distribution is
/// implementation-defined, so seeded streams would not be portable across
/// standard libraries; this mapping is pinned.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace rsl
