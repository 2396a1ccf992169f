#pragma once

#include <cmath>
#include <cstdint>

namespace pbcs::rng {

// Counter-based random stream. Any word is addressable as (key, counter)
// without sequential draws, so matrix entries can be generated in any order
// (or in parallel) and always come out bit-identical.
//
// The full transformation, fixed for file-format version 1:
//   mix64      = SplitMix64 finalizer
//   key        = mix64(master_seed + GAMMA * (stream + 1))
//   word(c)    = mix64(key + GAMMA * (c + 1))
//   u01(w)     = (w >> 11) * 2^-53                       in [0, 1)
//   normal(c)  = sqrt(-2 ln(1 - u01(word(2c)))) * cos(2 pi u01(word(2c+1)))

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Subkey for one logical stream (e.g. one spectral row's sensing matrix).
constexpr std::uint64_t stream_key(std::uint64_t master_seed,
                                   std::uint64_t stream) noexcept {
  return mix64(master_seed + kGamma * (stream + 1));
}

constexpr std::uint64_t word_at(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + kGamma * (counter + 1));
}

constexpr double uniform01(std::uint64_t word) noexcept {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

inline double uniform_at(std::uint64_t key, std::uint64_t counter) noexcept {
  return uniform01(word_at(key, counter));
}

// Standard normal deviate at position `counter` of the keyed stream.
// Box-Muller, cosine branch only; 1 - u1 lies in (0, 1] so the log is finite.
inline double normal_at(std::uint64_t key, std::uint64_t counter) noexcept {
  const double u1 = uniform_at(key, 2 * counter);
  const double u2 = uniform_at(key, 2 * counter + 1);
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(kTwoPi * u2);
}

}  // namespace pbcs::rng
