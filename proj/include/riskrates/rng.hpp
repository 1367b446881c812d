#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace riskrates {

/// Stafford "mix13" finalizer used by SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child key from a parent key and a list of stream ids.
/// Equal inputs give equal keys; the result does not depend on call order
/// elsewhere in the program.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> ids) noexcept {
  std::uint64_t k = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t id : ids) k = mix64(k + 0x9e3779b97f4a7c15ULL * (id + 1));
  return k;
}

/// Counter-based generator: draw i is mix64(key + (i+1)·γ).
///
/// Satisfies UniformRandomBitGenerator. A stream is fully determined by its
/// key, so parallel replications can each own one without coordination.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace riskrates
