#pragma once

#include <cstdint>

namespace phirm {

// All randomized generators in this project draw from the generator below
// rather than <random>, so that a given seed produces bit-identical output
// on every platform and in any port of these tools. The stdlib engines are
// portable but its distributions are not.
//
// Algorithm: xoshiro256** 1.0 (Blackman & Vigna), state seeded from a
// single 64-bit value through the splitmix64 mixer. Derived draws:
//   * next_double: high 53 bits / 2^53, uniform in [0, 1)
//   * uniform_int: bitmask rejection, unbiased
//   * uniform_real: lo + next_double * (hi - lo)

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      word = splitmix64(x);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) {  // full 64-bit span
      return static_cast<std::int64_t>(next_u64());
    }
    std::uint64_t mask = span - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t draw;
    do {
      draw = next_u64() & mask;
    } while (draw >= span);
    return lo + static_cast<std::int64_t>(draw);
  }

  /// Uniform real in [lo, hi).
  double uniform_real(double lo, double hi) {
    return lo + next_double() * (hi - lo);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
};

}  // namespace phirm
