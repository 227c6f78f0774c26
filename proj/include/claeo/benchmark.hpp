#pragma once

#include <cmath>
#include <string>

#include "claeo/basis.hpp"
#include "claeo/plant.hpp"

namespace claeo {

/// Fully specified benchmark problem: plant, cost, closed-form optimum, and
/// the exact value-function basis with its ideal weights.
struct Benchmark {
  std::string id;
  ParametricPlant plant;
  CostSpec cost;
  AnalyticSolution analytic;
  Basis basis;
  Vec ideal_theta;  // Theta such that V* = Theta' psi
};

/// Second-order plant
///   dx1 = x2
///   dx2 = -x1 + W1 x2 + W2 (x1+x2) g(x)^2 + g(x) u
/// with W = (-1.5, 0.5), Q = x'[[2,1],[1,1]]x, R = 1.  The optimum is
/// V*(x) = 1.5 x1^2 + 2 x1 x2 + x2^2 and u*(x) = -g(x)(x1+x2).  The HJB
/// residual of this pair is (x1+x2)^2 (s^2 - g^2), where s is the factor
/// squared inside the regressor, so the analytic solution exists exactly
/// when the regressor is built from the control gain itself; both variants
/// keep that coupling.
///   "benchmark-sin": g(x) = sin(x1) + 2
///   "benchmark-cos": g(x) = cos(2 x1) + 2
inline Benchmark make_benchmark(const std::string& id) {
  bool sin_gain;
  if (id == "benchmark-sin")
    sin_gain = true;
  else if (id == "benchmark-cos")
    sin_gain = false;
  else
    throw ConfigError("unknown benchmark preset: " + id);

  Benchmark b;
  b.id = id;

  b.plant.n = 2;
  b.plant.m = 2;
  if (sin_gain)
    b.plant.control_gain = [](const Vec& x) { return std::sin(x(0)) + 2.0; };
  else
    b.plant.control_gain = [](const Vec& x) { return std::cos(2.0 * x(0)) + 2.0; };
  const auto g_fn = b.plant.control_gain;
  b.plant.regressor = [g_fn](const Vec& x) {
    const double s = g_fn(x);
    Vec phi(2);
    phi << x(1), (x(0) + x(1)) * s * s;
    return phi;
  };
  b.plant.known_drift = [](const Vec& x) { return -x(0); };
  b.plant.true_weights = Vec(2);
  b.plant.true_weights << -1.5, 0.5;

  b.cost.state_cost = [](const Vec& x) {
    // x' [[2,1],[1,1]] x
    return 2.0 * x(0) * x(0) + 2.0 * x(0) * x(1) + x(1) * x(1);
  };
  b.cost.control_weight = 1.0;

  b.analytic.value = [](const Vec& x) {
    return 1.5 * x(0) * x(0) + 2.0 * x(0) * x(1) + x(1) * x(1);
  };
  b.analytic.value_gradient = [](const Vec& x) {
    Vec g(2);
    g << 3.0 * x(0) + 2.0 * x(1), 2.0 * x(0) + 2.0 * x(1);
    return g;
  };
  const auto gain = b.plant.control_gain;
  b.analytic.policy = [gain](const Vec& x) {
    return -gain(x) * (x(0) + x(1));
  };

  b.basis = make_quadratic_basis_2d();
  b.ideal_theta = Vec(3);
  b.ideal_theta << 1.5, 2.0, 1.0;
  return b;
}

}  // namespace claeo
