#pragma once

#include <cstdint>
#include <limits>

namespace gantry {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Folds any number of words into one key. Order-sensitive.
template <typename... Words>
constexpr std::uint64_t mix_key(std::uint64_t first, Words... rest) noexcept {
  std::uint64_t h = mix64(first + 0x9E3779B97F4A7C15ULL);
  ((h = mix64(h ^ (static_cast<std::uint64_t>(rest) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)))), ...);
  return h;
}

/// Phases of a generation. Each phase owns a disjoint family of substreams.
enum class Phase : std::uint64_t {
  init = 1,
  evaluate = 2,
  pairing = 3,
  select_id_mutation = 4,
  id_mutation = 5,
  select_status_mutation = 6,
  status_mutation = 7,
  select_repair = 8,
  repair = 9,
  sweep_point = 10,
};

/// Counter-based stream: the i-th output is a pure function of (key, i).
/// Any unit of work that derives its key from (seed, generation, phase, index)
/// gets the same numbers no matter which thread runs it or in which order.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Stream(std::uint64_t key) noexcept : key_(mix64(key)) {}

  static constexpr Stream substream(std::uint64_t seed, std::uint64_t generation, Phase phase,
                                    std::uint64_t index) noexcept {
    return Stream(mix_key(seed, generation, static_cast<std::uint64_t>(phase), index));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). Rejection sampling, so exact and portable.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace gantry
