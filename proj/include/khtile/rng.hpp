#pragma once

#include <cstdint>

namespace khtile {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based stream: the value for (seed, counter) depends on nothing
// else, so cells can be sampled in any order or in parallel and still
// reproduce bit-for-bit. This is the SplitMix64 output function evaluated
// at position `counter` of the stream whose state starts at mix64(seed).
constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) {
  return mix64(mix64(seed) + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_hash(seed, counter) >> 11) * 0x1.0p-53;
}

// Per-trial seed used by the experiment harness: base ^ mix64(trial).
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
  return base_seed ^ mix64(trial_index);
}

}  // namespace khtile
