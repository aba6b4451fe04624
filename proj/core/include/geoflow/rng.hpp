#pragma once

#include <cstdint>
#include <cmath>

namespace geoflow {

// SplitMix64: tiny, seedable, splittable; keeps runs reproducible
// independent of thread count (each task derives its own stream).
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // in [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Rng split(std::uint64_t stream) const {
    Rng r(state ^ (0xA5A5A5A5DEADBEEFULL + stream * 0x9E3779B97F4A7C15ULL));
    r.next_u64();
    return r;
  }
};

}  // namespace geoflow
