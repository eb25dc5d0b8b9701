#pragma once

#include <cstdint>
#include <random>

namespace rsg {

// splitmix64: the standard 64-bit finalizer, used to derive independent
// per-realization seeds from one master seed. Documented in the README so
// external tools can reproduce the stream layout.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed for stream (a) of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) {
    return splitmix64(splitmix64(master) ^ splitmix64(a * 0x9E3779B97F4A7C15ull + 1));
}

/// Seed for stream (a, b): derive twice, so (1,0) and (0,1) never collide.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(master, a), b);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

} // namespace rsg
