#pragma once

#include <cmath>
#include <cstdint>

namespace wordprep {

/// splitmix64 finalizer; also used to combine seed components.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  return mix64(mix64(a) ^ (b + 0x9e3779b97f4a7c15ull));
}

inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

/// xoshiro256** with fixed draw helpers. The standard library engines are
/// portable but its distributions are not, so everything random in the
/// pipeline goes through this class; identical seeds give identical streams
/// on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ull;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      word = z ^ (z >> 31);
    }
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Unbiased draw in [0, bound). bound must be > 0.
  uint32_t uniform_u32(uint32_t bound) {
    // Lemire's multiply-shift rejection method.
    uint64_t m = uint64_t(uint32_t(next_u64())) * bound;
    uint32_t low = uint32_t(m);
    if (low < bound) {
      uint32_t threshold = -bound % bound;
      while (low < threshold) {
        m = uint64_t(uint32_t(next_u64())) * bound;
        low = uint32_t(m);
      }
    }
    return uint32_t(m >> 32);
  }

  /// Inclusive integer range.
  int uniform_int(int lo, int hi) {
    return lo + int(uniform_u32(uint32_t(hi - lo) + 1u));
  }

  /// Uniform in [lo, hi).
  double uniform_real(double lo, double hi) {
    return lo + unit_real() * (hi - lo);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double unit_real() { return double(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit_real() < p; }

  /// Box-Muller; deterministic, no cached spare value.
  double normal(double mean, double stddev) {
    const double u1 = double((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = unit_real();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(6.28318530717958647692 * u2);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t state_[4];
};

}  // namespace wordprep
