// 64-bit linear congruential generator, fixed constants, so that every
// sampled quantity is reproducible byte-for-byte across builds and platforms.
//   state <- state * 6364136223846793005 + 1442695040888963407
// Unit doubles take the top 53 bits: (state >> 11) * 2^-53.
#pragma once

#include <cstdint>

namespace anisofrac {

class Lcg64 {
public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  // Uniform in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
  std::uint64_t state_;
};

}  // namespace anisofrac
