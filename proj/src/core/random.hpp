#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace rcassi {

// Samplers are built on raw mt19937_64 output instead of the standard
// distributions so that a given seed produces the same stream on every
// platform and standard library.

/// Uniform double in [0, 1), 53 bits of resolution.
inline double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Deterministic standard-normal stream (Box-Muller pairs).
class GaussianSampler {
public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform53(rng_);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rcassi
