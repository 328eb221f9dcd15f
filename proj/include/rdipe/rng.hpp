#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

namespace rdipe {

/// Counter-based random stream.
///
/// A stream is identified by (seed, stream id). Output k of a stream is
/// mix64(key + (k + 1) * golden) where key = mix64(seed ^ mix64(stream + golden)) and mix64
/// is the SplitMix64 finalizer, so any draw is addressable without generating its
/// predecessors and streams are independent of scheduling. Satisfies
/// UniformRandomBitGenerator so it plugs into <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Independent child stream; children of different ids never share draws.
  Rng substream(std::uint64_t id) const noexcept { return Rng(key_, id); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

/// Fisher–Yates shuffle driven by Rng::below (portable, unlike std::shuffle).
template <typename T>
void shuffle(std::span<T> items, Rng &rng) noexcept {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

/// Standard normal deviate (Marsaglia polar method).
double normal(Rng &rng) noexcept;

/// Number of successes in `trials` Bernoulli(p) draws.
std::uint64_t binomial(std::uint64_t trials, double p, Rng &rng);

}  // namespace rdipe
