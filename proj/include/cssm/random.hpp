#pragma once

#include <cstdint>
#include <random>

namespace cssm {

using Engine = std::mt19937_64;

/// Seed used by the CLI and the table harness when none is given.
inline constexpr std::uint64_t kDefaultSeed = 12345;

/// SplitMix64 finalizer; used only to decorrelate seeds, never as a generator.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of stream `stream` under base seed `base`. Distinct streams of the
/// same base never share a seed.
constexpr std::uint64_t stream_seed(std::uint64_t base,
                                    std::uint64_t stream) noexcept {
  return mix64(mix64(base) ^ mix64(stream ^ 0xD1B54A32D192ED03ULL));
}

inline Engine make_engine(std::uint64_t base, std::uint64_t stream) {
  return Engine(stream_seed(base, stream));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(mix64(seed)); }

}  // namespace cssm
