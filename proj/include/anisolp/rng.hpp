#pragma once

#include <cstdint>

#include "anisolp/common.hpp"

namespace anisolp {

// splitmix64; all randomness in the toolkit flows through this so that runs
// are reproducible from a single integer seed on any platform.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Child stream seeded from the parent's output; advancing the child never
  // touches the parent.
  SplitMix64 split() { return SplitMix64(next()); }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  cd unit_phase() { return std::polar(1.0, 2.0 * kPi * uniform01()); }
};

}  // namespace anisolp
