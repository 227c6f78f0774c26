#pragma once

#include <cmath>

#include "claeo/types.hpp"

namespace claeo {

/// Odd smooth saturation: identity on [-M, M], iota*tanh tail beyond,
/// so |output| <= M(1+iota) and the derivative stays in (0, 1].
inline double saturate(double value, double bound_M, double iota = 0.01) {
  if (!(bound_M > 0.0)) throw ConfigError("saturate: bound M must be positive");
  const double nu = value / bound_M;
  const double a = std::abs(nu);
  if (a <= 1.0) return value;
  const double tail = 1.0 + iota * std::tanh((a - 1.0) / iota);
  return bound_M * (nu > 0.0 ? tail : -tail);
}

/// Analytic derivative of the saturation with respect to its input value.
inline double saturate_derivative(double value, double bound_M, double iota = 0.01) {
  if (!(bound_M > 0.0)) throw ConfigError("saturate: bound M must be positive");
  const double a = std::abs(value / bound_M);
  if (a <= 1.0) return 1.0;
  const double c = std::cosh((a - 1.0) / iota);
  return 1.0 / (c * c);
}

}  // namespace claeo
