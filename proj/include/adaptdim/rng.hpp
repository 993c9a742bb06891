#pragma once

#include <cstdint>
#include <limits>

namespace adaptdim::rng {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Key for counter position `index` under `key`. Distinct (key, index)
/// pairs give statistically independent streams.
constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t index) noexcept {
  return mix64(key ^ mix64(index ^ 0xD1B54A32D192ED03ULL));
}

template <class... Rest>
constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t index, Rest... rest) noexcept {
  return derive(derive(key, index), static_cast<std::uint64_t>(rest)...);
}

/// SplitMix64 stream started from a derived key. Satisfies
/// UniformRandomBitGenerator so it composes with <random> distributions.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterEngine(std::uint64_t key) noexcept : state_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    const std::uint64_t out = mix64(state_);
    state_ += 0x9E3779B97F4A7C15ULL;
    return out;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace adaptdim::rng
