#pragma once

#include <cmath>
#include <vector>

#include "spirallab/univalent.hpp"

namespace test {

using spirallab::Complex;
using spirallab::UnivalentMap;

inline std::vector<UnivalentMap> built_in_families() {
  return {UnivalentMap::identity(),
          UnivalentMap::koebe(),
          UnivalentMap::mobius_spiral(0.3),
          UnivalentMap::mobius_spiral({0.0, 0.3}),
          UnivalentMap::spiral_koebe(0.6),
          UnivalentMap::half_plane(),
          UnivalentMap::rational({0.0, 1.0}, {1.0, 0.0, -0.25})};
}

inline bool near(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace test
