#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sc {

// Stable seed mixer (splitmix64). mt19937_64 output is standardized, and the
// draws below avoid std::uniform_*_distribution, so every seeded sequence is
// identical across platforms and standard libraries.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform index in [0, n).
    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(engine() % n); }

    // Standard normal via Box-Muller (always consumes two draws).
    double gaussian();
};

inline double Rng::gaussian() {
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace sc
