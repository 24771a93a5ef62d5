#pragma once

#include <cstdint>

namespace wurlab {

// splitmix64; used only to expand seeds into generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with explicit substreams.
//
// Substream seeding: the stream for trial t of a run seeded with s is derived
// from splitmix64 applied to (s + t * golden-ratio constant), so trial results
// are independent of execution order and the serial/parallel split.
class Rng {
 public:
  static Rng seeded(std::uint64_t seed) { return for_trial(seed, 0); }

  static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
    Rng r;
    std::uint64_t sm = seed + trial * 0x9e3779b97f4a7c15ULL;
    for (auto& word : r.state_) word = splitmix64(sm);
    return r;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

  // Unbiased integer in [0, n); n >= 1. Lemire multiply-shift with rejection.
  std::uint64_t next_below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  int next_int_below(int n) { return static_cast<int>(next_below(static_cast<std::uint64_t>(n))); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4] = {1, 2, 3, 4};
};

}  // namespace wurlab
