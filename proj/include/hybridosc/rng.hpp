#pragma once

#include <cstdint>

namespace hybridosc {

/// splitmix64 step; advances the state and returns the next output.
inline std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Counter-based stream split: the returned state is decorrelated from both
/// the seed and neighboring stream indices, so parallel consumers can draw
/// independently in any order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    (void)splitmix64_next(s);
    (void)splitmix64_next(s);
    return s;
}

inline double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
}

/// Binomial(n, p) by direct Bernoulli counting; exact and branch-free of any
/// distribution-shape approximations.
inline long binomial_draw(long n, double p, std::uint64_t& state) {
    long k = 0;
    for (long i = 0; i < n; ++i) {
        if (uniform01(state) < p) ++k;
    }
    return k;
}

}  // namespace hybridosc
