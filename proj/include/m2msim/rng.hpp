#pragma once

#include <cstdint>
#include <random>

namespace m2m {

using Rng = std::mt19937_64;

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: the same (master, stream, index) always maps
/// to the same seed, independent of evaluation order.
inline std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
  return SplitMix64(SplitMix64(SplitMix64(master) ^ stream) ^ index);
}

/// Random streams used inside one drop.
enum class Stream : std::uint64_t {
  kUePlacement = 1,
  kMtcdPlacement = 2,
  kMtcgPlacement = 3,
  kDutyCycle = 4,
  kShadowing = 5,
  kColoring = 6,
};

inline Rng MakeRng(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
  return Rng(DeriveSeed(seed, static_cast<std::uint64_t>(stream), index));
}

}  // namespace m2m
