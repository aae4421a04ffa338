#pragma once

#include <cstdint>
#include <limits>

namespace satmdp {

// Counter-based generator: the k-th draw of stream s under seed x is
// splitmix64(x ^ mix(s) + k * golden). Draws are a pure function of
// (seed, stream, counter), so any run is replayable from the seed alone and
// independent streams can be forked without sharing state.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream), key_(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return mix(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % n;
  }

  // Independent stream derived from this generator's seed.
  CounterRng fork(std::uint64_t stream) const noexcept {
    return CounterRng(seed_, mix(stream_ ^ (stream * 0xbf58476d1ce4e5b9ULL + 1)));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace satmdp
