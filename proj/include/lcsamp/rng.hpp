#pragma once

#include <cstdint>
#include <random>

namespace lcsamp {

/// Generator used throughout the library.
using Rng = std::mt19937_64;

/// One output of the SplitMix64 sequence started at `state`.
inline std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for chain `chain` of an ensemble keyed by `seed`.
///
/// Equals the (chain+1)-th SplitMix64 output of the stream seeded at `seed`,
/// so nearby ensemble seeds and nearby chain indices give unrelated streams.
/// Deliberately not `seed + chain`: consecutive raw seeds would hand
/// correlated initial states to the generators.
inline std::uint64_t chain_seed(std::uint64_t seed, std::uint64_t chain) {
  return splitmix64(seed + chain * 0x9E3779B97F4A7C15ULL);
}

}  // namespace lcsamp
