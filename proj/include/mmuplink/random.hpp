#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mmuplink {

/// Random stream used throughout the library.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Order-sensitive hash of a key tuple. Used both to derive independent
/// streams and as a counter-based generator.
constexpr std::uint64_t mix_keys(std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t k : keys)
        h = splitmix64(h ^ splitmix64(k));
    return h;
}

/// Independent stream for (master seed, a, b, c).
inline Rng make_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0)
{
    return Rng(mix_keys({master, a, b, c}));
}

/// Uniform in the open interval (0, 1) from a 64-bit key.
inline double counter_uniform(std::uint64_t key)
{
    return (static_cast<double>(splitmix64(key) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal deviate that is a pure function of `key` (Box-Muller).
inline double counter_normal(std::uint64_t key)
{
    const double u1 = counter_uniform(key);
    const double u2 = counter_uniform(key ^ 0xd1b54a32d192ed03ULL);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

} // namespace mmuplink
