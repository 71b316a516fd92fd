// SPDX-License-Identifier: Apache-2.0
//
// Named, independent random streams derived from one master seed.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rrsel {

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed for the stream (`name`, `index`) under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view name, std::uint64_t index = 0)
{
    return splitmix64(splitmix64(master ^ fnv1a(name)) + splitmix64(index + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t master, std::string_view name, std::uint64_t index = 0)
{
    return Rng(derive_seed(master, name, index));
}

/// Uniform double on [0, 1) with a fixed construction, independent of the
/// standard library's distribution implementation.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace rrsel
