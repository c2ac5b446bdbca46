#pragma once

#include <cstdint>

namespace hvlab {

// Counter-based generator: the n-th draw of a stream is a pure function of (seed, n).
// The mixing function is the SplitMix64 finalizer; the resulting sequence is part of
// the reproducibility contract of every seeded operation in the library.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t counter) noexcept {
  return mix64(mix64(seed) ^ (counter * 0xD1B54A32D192ED03ULL));
}

// Uniform in [0, 1) with 53 random mantissa bits.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
  return static_cast<double>(counter_bits(seed, counter) >> 11) * 0x1.0p-53;
}

// Seed for an independent substream (e.g. a worker or a sub-experiment).
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

}  // namespace hvlab
