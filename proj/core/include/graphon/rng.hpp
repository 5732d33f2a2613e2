#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace graphon {

// Seed split rule used everywhere randomness fans out (trials, restarts,
// per-node draws): child = splitmix64(splitmix64(seed) ^ stream * phi64).
// Workers receive per-index seeds from this rule, so results do not depend
// on the worker count.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ (stream * 0x9E3779B97F4A7C15ULL));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return Rng(derive_seed(seed, stream));
}

/// Uniform double in (0,1). Hand-rolled so draws are pinned to the engine's
/// standardized output rather than an implementation-defined distribution.
inline double uniform01(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Uniform integer in [0, n).
inline int uniform_below(Rng& rng, int n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<int>(x % bound);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

inline double gumbel01(Rng& rng) {
    const double u = uniform01(rng);
    return -std::log(-std::log(u));
}

/// Standard normal via Box-Muller; second value discarded for determinism.
inline double normal01(Rng& rng) {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

/// In-place Fisher-Yates shuffle driven by the pinned integer draws.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
        std::swap(v[static_cast<std::size_t>(i)],
                  v[static_cast<std::size_t>(uniform_below(rng, i + 1))]);
    }
}

}  // namespace graphon
