#pragma once

#include <cstdint>
#include <initializer_list>

// Counter-based randomness. Every random decision is a pure function of
// (seed, key...), so results do not depend on evaluation order or on how
// work is split across threads.

namespace ictomo::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent 64-bit stream key from a seed and a tuple of keys.
constexpr std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = mix(seed);
    std::uint64_t salt = 1;
    for (std::uint64_t k : keys) {
        h = mix(h ^ mix(k + salt * kGolden));
        ++salt;
    }
    return h;
}

/// Maps 64 random bits to a double in [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace ictomo::rng
