#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>

namespace isc {

// std::mt19937_64 output is pinned by the standard; the <random>
// distributions are not. Sampling helpers are spelled out here so seeded
// runs reproduce bit-for-bit across standard libraries.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Unbiased integer in [0, n) by masked rejection.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
    if (n < 2) return 0;
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(n - 1);
    for (;;) {
        const std::uint64_t v = gen() & mask;
        if (v < n) return v;
    }
}

/// Uniform double in [0,1).
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(gen);
}

/// Standard normal via Box-Muller.
inline double normal_unit(std::mt19937_64& gen) {
    double u1 = uniform_unit(gen);
    while (u1 <= 0.0) u1 = uniform_unit(gen);
    const double u2 = uniform_unit(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace isc
