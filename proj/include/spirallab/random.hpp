#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spirallab/types.hpp"

namespace spirallab {

/// Seedable generator with platform-independent output.
///
/// std::mt19937_64 is fully specified by the standard, but the
/// std::*_distribution adaptors are not, so the conversions to floating point
/// are done here explicitly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x5eed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (no cached second variate).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  /// Uniform point in the disk of the given radius.
  Complex in_disk(double radius = 1.0) {
    const double rho = radius * std::sqrt(uniform());
    return std::polar(rho, 2.0 * kPi * uniform());
  }

  Complex unit_phase() { return std::polar(1.0, 2.0 * kPi * uniform()); }

  Complex complex_normal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 engine_;
};

/// Radical inverse of `index` in the given prime base (Halton coordinate).
inline double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

inline const std::vector<unsigned>& small_primes() {
  static const std::vector<unsigned> primes{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                            41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
  return primes;
}

}  // namespace spirallab
