#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "claeo/types.hpp"

namespace claeo {

/// Chain-of-integrators plant with parametric drift on the last channel:
///   dx_i = x_{i+1} for i < n,  dx_n = f0(x) + W'Phi(x) + g(x) u.
struct ParametricPlant {
  int n = 0;  // state dimension
  int m = 0;  // regressor dimension
  std::function<Vec(const Vec&)> regressor;       // Phi: R^n -> R^m
  std::function<double(const Vec&)> control_gain; // g: R^n -> R, |g| >= g_min > 0
  std::function<double(const Vec&)> known_drift;  // f0: R^n -> R, optional
  Vec true_weights;                               // W in R^m

  double f0(const Vec& x) const { return known_drift ? known_drift(x) : 0.0; }

  /// Full drift of the last channel, f0 + W'Phi.
  double drift(const Vec& x) const {
    return f0(x) + true_weights.dot(regressor(x));
  }

  Vec derivative(const Vec& x, double u) const {
    require_finite(x, "x");
    require_finite(u, "u");
    Vec dx(n);
    for (int i = 0; i + 1 < n; ++i) dx(i) = x(i + 1);
    dx(n - 1) = drift(x) + control_gain(x) * u;
    return dx;
  }
};

/// Running cost Q(x) + u'Ru with scalar control weight R.
struct CostSpec {
  std::function<double(const Vec&)> state_cost;  // Q, positive definite, Q(0)=0
  double control_weight = 1.0;                   // R > 0

  double running(const Vec& x, double u) const {
    return state_cost(x) + control_weight * u * u;
  }
};

/// Known closed-form solution of the infinite-horizon problem, used as oracle.
struct AnalyticSolution {
  std::function<double(const Vec&)> value;            // V*
  std::function<Vec(const Vec&)> value_gradient;      // V*_x as a column vector
  std::function<double(const Vec&)> policy;           // u*
};

/// Residual of the HJB equation for a candidate gradient/control pair.
/// Zero (to roundoff) exactly when (V_x, u) solve the problem.
inline double hjb_residual(const ParametricPlant& plant, const CostSpec& cost,
                           const Vec& V_x, double u, const Vec& x) {
  require_finite(V_x, "V_x");
  return V_x.dot(plant.derivative(x, u)) + cost.running(x, u);
}

/// u = -1/2 R^{-1} g(x) (V_x)_n, the minimizer of the Hamiltonian.
inline double optimal_policy_from_gradient(const ParametricPlant& plant,
                                           const CostSpec& cost, const Vec& V_x,
                                           const Vec& x) {
  require_finite(V_x, "V_x");
  require_finite(x, "x");
  return -0.5 / cost.control_weight * plant.control_gain(x) * V_x(plant.n - 1);
}

/// Trapezoidal integral of the running cost over a time-ordered trace.
inline double accumulate_cost(const CostSpec& cost,
                              const std::vector<double>& t,
                              const std::vector<Vec>& x,
                              const std::vector<double>& u) {
  if (t.empty() || t.size() != x.size() || t.size() != u.size())
    throw ContractError("accumulate_cost: empty or inconsistent trace");
  double J = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double a = cost.running(x[i], u[i]);
    const double b = cost.running(x[i + 1], u[i + 1]);
    J += 0.5 * (a + b) * (t[i + 1] - t[i]);
  }
  return J;
}

}  // namespace claeo
