#pragma once

#include <cstdint>
#include <random>

namespace glimmer {

// std::uniform_*_distribution output is implementation-defined; these are not,
// so seeded runs reproduce across standard libraries.

using Rng = std::mt19937_64;

/// Uniform integer in [0, n), n > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = Rng::max() - Rng::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

/// Uniform double in [0, 1).
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace glimmer
