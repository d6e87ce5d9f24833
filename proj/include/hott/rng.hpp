#pragma once

#include <cstdint>
#include <random>

namespace hott {

/// Top 53 bits of the generator state as a double in [0, 1). Pinned to this
/// construction (not std::uniform_real_distribution) so streams are
/// bit-identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// splitmix64 finalizer; used to derive independent per-item seeds from a
/// base seed so work can be partitioned without coupling RNG streams.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t item) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (item + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic integer draw in [0, n) via rejection-free scaling of the
/// 53-bit uniform; n is tiny everywhere this is used (topic counts).
inline int uniform_below(std::mt19937_64& rng, int n) {
    int k = static_cast<int>(uniform01(rng) * n);
    return k >= n ? n - 1 : k;
}

}  // namespace hott
