#pragma once

#include "it2num.hpp"

namespace it2ipa {

namespace detail {

// Averaged quarter-sum of one trapezoid, using that trapezoid's own heights:
// ((U - L) + (h1*m1 - L) + (h2*m2 - L)) / 4 + L
inline double quarter_sum(const trapezoid& t) noexcept {
  const double lo = t.x[0];
  return ((t.x[3] - lo) + (t.h1 * t.x[1] - lo) + (t.h2 * t.x[2] - lo)) / 4.0 + lo;
}

}  // namespace detail

/// DTraT crisp value: mean of the upper and lower quarter-sums.
/// Exact for crisp numbers with unit heights.
inline double dtrat(const it2_number& a) noexcept {
  return 0.5 * (detail::quarter_sum(a.upper) + detail::quarter_sum(a.lower));
}

}  // namespace it2ipa
