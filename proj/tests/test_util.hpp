#ifndef ARCPINN_TEST_UTIL_HPP
#define ARCPINN_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>

namespace arcpinn::testutil {

/// Relative error with a scale floor: |a - b| / max(scale, |a|, |b|).
inline double rel_err(double a, double b, double scale = 1e-9) {
  return std::abs(a - b) / std::max({scale, std::abs(a), std::abs(b)});
}

}  // namespace arcpinn::testutil

#endif
