#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace faigp {

using Rng = std::mt19937_64;

constexpr auto SplitMix64(std::uint64_t x) noexcept -> std::uint64_t
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

// Stream seed for a tuple of coordinates (e.g. run seed, generation, slot),
// so every individual draws from its own stream independent of scheduling.
constexpr auto DeriveSeed(std::initializer_list<std::uint64_t> parts) noexcept -> std::uint64_t
{
    std::uint64_t h = 0x6A09E667F3BCC909ULL;
    for (auto p : parts) {
        h = SplitMix64(h ^ SplitMix64(p));
    }
    return h;
}

inline auto Uniform(Rng& rng, double lo, double hi) -> double
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline auto Bernoulli(Rng& rng, double p) -> bool
{
    return p >= 1.0 || (p > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p);
}

template <typename Int>
auto UniformInt(Rng& rng, Int lo, Int hi) -> Int
{
    return std::uniform_int_distribution<Int>(lo, hi)(rng);
}

} // namespace faigp
