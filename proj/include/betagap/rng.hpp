#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace betagap {

/// splitmix64 finaliser; used to derive substream keys.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** random stream. Value type: copy it to fork, never share one
/// across threads. Streams for Monte Carlo trials come from for_trial().
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  /// Independent substream keyed by (master seed, trial index).
  static Stream for_trial(std::uint64_t seed, std::uint64_t trial) noexcept {
    std::uint64_t sm = seed;
    const std::uint64_t a = splitmix64(sm);
    std::uint64_t mix = a ^ (trial * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL);
    return Stream(splitmix64(mix));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Standard normal deviate.
  double normal() { return normal_(*this); }
  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Chi-distributed deviate with k > 0 degrees of freedom.
  double chi(double k) { return std::sqrt(2.0 * std::gamma_distribution<double>(0.5 * k, 1.0)(*this)); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  std::normal_distribution<double> normal_;
};

}  // namespace betagap
