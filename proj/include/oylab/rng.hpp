#pragma once

// Deterministic sampling helper. Every randomized scan in the library goes
// through this type with an explicit seed so runs are bit-reproducible.

#include <cstdint>
#include <random>

namespace oylab {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed = kDefaultSeed) : eng_(seed) {}

  // Uniform in [0, 1) with the full 53-bit mantissa.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace oylab
