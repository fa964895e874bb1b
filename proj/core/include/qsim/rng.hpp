#pragma once

#include <cstdint>
#include <limits>

namespace qsim {

struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

/// xoshiro256++ with per-trajectory substreams. Trajectory j's stream is a
/// pure function of (master_seed, j), so results are independent of how
/// trajectories are scheduled across workers.
class Rng {
 public:
  using result_type = uint64_t;

  static Rng trajectory_stream(uint64_t master_seed, uint64_t trajectory_index) {
    SplitMix64 mix(master_seed);
    uint64_t a = mix.next();
    uint64_t b = mix.next();
    SplitMix64 sub(a ^ (trajectory_index * 0x9e3779b97f4a7c15ull + b));
    Rng rng;
    for (auto& word : rng.s_) word = sub.next();
    return rng;
  }

  explicit Rng(uint64_t seed = 0x1234abcd) {
    SplitMix64 mix(seed);
    for (auto& word : s_) word = mix.next();
  }

  uint64_t operator()() {
    uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  static constexpr uint64_t min() { return 0; }
  static constexpr uint64_t max() { return std::numeric_limits<uint64_t>::max(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Standard normal via the polar (Marsaglia) method; one cached spare.
  double gaussian();

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qsim
