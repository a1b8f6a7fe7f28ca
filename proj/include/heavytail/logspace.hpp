// Small log-domain helpers used wherever power sums or horizon constants
// would overflow in linear space.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace heavytail {

// ln(e^a + e^b), stable for any magnitudes including -inf inputs.
inline double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// ln(1 + e^x) without overflow for large x (softplus).
inline double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// Sign with sign(0) = 0.
inline double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace heavytail
