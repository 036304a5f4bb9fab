// rng.hpp — counter-based random streams for reproducible parallel simulation.
//
// Generator: SplitMix-style counter hash. A stream is identified by a 64-bit
// key derived from (base_seed, path_index); the value at counter c is
// mix64(key + c * GOLDEN). State per stream is (key, counter) = 128 bits.
// Any (key, counter) pair can be evaluated independently, so paths can be
// simulated in any order, on any number of threads or SIMD lanes, with
// bit-identical results.

#pragma once

#include <cstdint>

namespace sitmark::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer (Stafford mix 13).
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// Random 64-bit word for (stream key, counter).
inline std::uint64_t at(std::uint64_t key, std::uint64_t counter) {
    return mix64(key + counter * kGolden);
}

// Stream key for one simulation path. Both arguments are avalanched so that
// adjacent seeds or path indices yield unrelated streams.
inline std::uint64_t stream_key(std::uint64_t base_seed, std::uint64_t path_index) {
    return mix64(base_seed ^ mix64(path_index + kGolden));
}

// Uniform double in the open interval (0,1), 52-bit resolution. The shifted
// value stays below 2^52, so every operation here is exact and the result is
// never 0 or 1; inverse-CDF transforms stay finite.
inline double uniform01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace sitmark::rng
