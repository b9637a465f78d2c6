#pragma once

#include <cstdint>
#include <random>

namespace parcpt {

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Splittable counter-based stream key. The child for counter i depends only
/// on (key, i), so per-replicate streams do not depend on execution order.
class StreamKey {
 public:
  constexpr explicit StreamKey(std::uint64_t seed) : key_(mix64(seed + kGamma)) {}

  constexpr StreamKey split(std::uint64_t counter) const {
    return StreamKey(Raw{}, mix64(key_ + (counter + 1) * kGamma));
  }

  constexpr std::uint64_t value() const { return key_; }

  std::mt19937_64 engine() const { return std::mt19937_64(key_); }

 private:
  struct Raw {};
  constexpr StreamKey(Raw, std::uint64_t key) : key_(key) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
};

}  // namespace parcpt
