#pragma once

#include <cmath>
#include <vector>

#include "rank1/spectral_model.hpp"

namespace rank1::fixtures {

// lambda_n = n over Z with d = 1.
inline BaseSpectrum integers() {
  BaseSpectrum s;
  s.tail = {1.0, 0.0};
  return validate_base(s);
}

// Coefficients with c_n = values[n - offset] on a head, zero elsewhere;
// a = sqrt|c|, b = c / sqrt|c|, and a = 1, b = 0 where c = 0.
inline PerturbationCoefficients residue_head(Index offset, const std::vector<cplx>& c) {
  PerturbationCoefficients p;
  p.a.head_offset = offset;
  p.b.head_offset = offset;
  for (cplx v : c) {
    const double r = std::sqrt(std::abs(v));
    p.a.head.emplace_back(r == 0.0 ? 1.0 : r, 0.0);
    p.b.head.push_back(r == 0.0 ? cplx(0.0) : v / r);
  }
  return p;
}

// c_0 = 0.275, c_1 = 0.075: F(z) = 1 + 0.275/(0 - z) + 0.075/(1 - z) has
// zeros 0.25 and 1.1.
inline PerturbationCoefficients two_point() { return residue_head(0, {0.275, 0.075}); }

}  // namespace rank1::fixtures
