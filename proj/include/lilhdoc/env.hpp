#pragma once

// Seeded Bernoulli reward environment.
//
// Stream derivation (portable, documented so golden traces can be reproduced
// anywhere):
//
//   key   = splitmix64_mix(seed ^ splitmix64_mix(run_index))
//   state = four consecutive SplitMix64 outputs starting from `key`
//   gen   = xoshiro256** 1.0 (Blackman & Vigna) on that state
//   u     = (gen() >> 11) * 2^-53            (53-bit uniform in [0, 1))
//   reward(arm) = u < mean[arm] ? 1 : 0
//
// where splitmix64_mix is the SplitMix64 output finalizer and a SplitMix64
// step adds 0x9E3779B97F4A7C15 before mixing.

#include <array>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lilhdoc/core.hpp"

namespace lilhdoc {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return splitmix64_mix(state_);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256StarStar {
 public:
  explicit constexpr Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
  }

  constexpr std::uint64_t next() {
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

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Seed of the independent stream for run `run_index` under base `seed`.
inline constexpr std::uint64_t derive_stream_seed(std::uint64_t seed,
                                                  std::uint64_t run_index) {
  return splitmix64_mix(seed ^ splitmix64_mix(run_index));
}

/// Anything the GAI loop can pull: returns a 0/1 reward for an arm.
template <typename E>
concept RewardOracle = requires(E env, std::size_t arm) {
  { env.pull(arm) } -> std::convertible_to<int>;
};

class BernoulliEnv {
 public:
  BernoulliEnv(const BanditInstance& instance, std::uint64_t seed,
               std::uint64_t run_index = 0)
      : means_(instance.means().begin(), instance.means().end()),
        rng_(derive_stream_seed(seed, run_index)) {}

  int pull(std::size_t arm) {
    if (arm >= means_.size()) {
      throw std::out_of_range("arm " + std::to_string(arm) + " out of range");
    }
    ++pulls_;
    return rng_.next_unit() < means_[arm] ? 1 : 0;
  }

  std::uint64_t pulls() const { return pulls_; }
  std::size_t arm_count() const { return means_.size(); }

 private:
  std::vector<double> means_;
  Xoshiro256StarStar rng_;
  std::uint64_t pulls_ = 0;
};

inline BernoulliEnv new_env(const BanditInstance& instance, std::uint64_t seed,
                            std::uint64_t run_index) {
  return BernoulliEnv(instance, seed, run_index);
}

}  // namespace lilhdoc
