#pragma once

#include <cstdint>

namespace rqmcmix {

// Counter-based pseudo-randomness used throughout the library.  Everything
// that consumes randomness (scrambles, digital shifts, Monte Carlo draws)
// is a pure function of a 64-bit key and a 64-bit counter, which makes
// replicates reproducible and safe to evaluate concurrently.

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// Finalizer from splitmix64 (Stafford mix13 constants).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

/// Keyed pseudo-random function: 64 uniform bits per (key, counter) pair.
inline std::uint64_t prf(std::uint64_t key, std::uint64_t counter) {
  return mix64(key + kGoldenGamma * (counter + 1));
}

/// Seed-splitting scheme: stream `tag` of a master seed.  Derived seeds for
/// replicates, strata and dimensions all come from here, so one master seed
/// determines an entire experiment.  Chained splits use distinct tags at
/// each level (replicate index, then stratum, then dimension).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed) ^ prf(seed, tag));
}

/// Uniform draw on [0,1) with 53 random bits.
inline double uniform_double(std::uint64_t key, std::uint64_t counter) {
  return static_cast<double>(prf(key, counter) >> 11) * 0x1p-53;
}

}  // namespace rqmcmix
