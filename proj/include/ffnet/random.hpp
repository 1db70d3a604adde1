#pragma once

#include <cstdint>
#include <random>

namespace ffnet {

/// Seeded double generator with fixed transforms. std::mt19937_64 is fully
/// specified by the standard, and the uniform/normal mappings here avoid
/// std::*_distribution, whose output is implementation-defined. Identical
/// seeds therefore give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1]; safe to feed into log().
  double uniform_open() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (cosine branch only).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace ffnet
