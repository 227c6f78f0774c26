#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>

#include "claeo/history_stack.hpp"
#include "claeo/plant.hpp"
#include "claeo/saturation.hpp"

namespace claeo {

/// Companion-form matrix E built from the observer gain vector L.
inline Mat observer_error_matrix(const Vec& L) {
  const int d = static_cast<int>(L.size());
  Mat E = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    E(i, 0) = -L(i);
    if (i + 1 < d) E(i, i + 1) = 1.0;
  }
  return E;
}

inline double max_real_eigenvalue(const Mat& A) {
  Eigen::EigenSolver<Mat> es(A);
  return es.eigenvalues().real().maxCoeff();
}

struct ObserverConfig {
  Vec gains_L;          // n+1 entries, E(L) Hurwitz
  double epsilon = 1e-3;
  Vec sat_bounds_M;     // n+1 positive bounds
  Mat learning_rate;    // Gamma3, m x m symmetric positive definite
  int stack_capacity = 0;  // p >= m
  double sat_overshoot = 0.01;  // iota
  // Data-quality gate for recording: a record is offered only while the output
  // innovation |y - xhat_1| is at its tracking floor, below record_innov_tol
  // times epsilon^2.  Innovation spikes mean the extended estimate lags the
  // lumped drift, which would store a biased target in the stack.
  double record_innov_tol = 5e-3;

  void validate(int n, int m) const {
    if (gains_L.size() != n + 1)
      throw ConfigError("observer.L must have n+1 entries");
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw ConfigError("observer.epsilon must lie in (0,1)");
    if (sat_bounds_M.size() != n + 1 || (sat_bounds_M.array() <= 0.0).any())
      throw ConfigError("observer.M must have n+1 positive entries");
    if (learning_rate.rows() != m || learning_rate.cols() != m ||
        !learning_rate.isApprox(learning_rate.transpose(), 1e-12))
      throw ConfigError("observer.gamma3 must be m x m symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(learning_rate);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw ConfigError("observer.gamma3 must be positive definite");
    if (stack_capacity < m)
      throw ConfigError("observer.stack_capacity must be >= m");
    if (max_real_eigenvalue(observer_error_matrix(gains_L)) >= 0.0)
      throw ConfigError("E not Hurwitz for the given observer.L");
    if (!(record_innov_tol > 0.0))
      throw ConfigError("observer.record_innov_tol must be positive");
  }

  /// Innovation gains l_i / eps^i for the state channels.
  Vec gamma1(int n) const {
    Vec g(n);
    double scale = 1.0;
    for (int i = 0; i < n; ++i) {
      scale /= epsilon;
      g(i) = gains_L(i) * scale;
    }
    return g;
  }

  /// Innovation gain l_{n+1} / eps^{n+1} for the extended state.
  double gamma2(int n) const {
    return gains_L(n) / std::pow(epsilon, n + 1);
  }
};

struct ObserverState {
  Vec xhat;               // estimate of x
  double xhat_ext = 0.0;  // estimate of x_{n+1} = W'Phi(x)
  Vec What;               // parameter estimate
  double aux_theta = 0.0; // vartheta, full-state variant only

  static ObserverState zero(int n, int m) {
    ObserverState st;
    st.xhat = Vec::Zero(n);
    st.What = Vec::Zero(m);
    return st;
  }
};

/// Saturated copy of the extended estimate vector (xbar_1..xbar_{n+1}).
inline Vec saturated_estimates(const ObserverConfig& cfg, const ObserverState& st) {
  const int n = static_cast<int>(st.xhat.size());
  Vec xbar(n + 1);
  for (int i = 0; i < n; ++i)
    xbar(i) = saturate(st.xhat(i), cfg.sat_bounds_M(i), cfg.sat_overshoot);
  xbar(n) = saturate(st.xhat_ext, cfg.sat_bounds_M(n), cfg.sat_overshoot);
  return xbar;
}

/// True when every estimate lies in the linear region of its saturation, so
/// the saturated copy equals the raw estimate and recorded data is undistorted.
inline bool estimates_unsaturated(const ObserverConfig& cfg,
                                  const ObserverState& st) {
  const int n = static_cast<int>(st.xhat.size());
  const double margin = 1.0 - cfg.sat_overshoot;
  for (int i = 0; i < n; ++i)
    if (std::abs(st.xhat(i)) > margin * cfg.sat_bounds_M(i)) return false;
  return std::abs(st.xhat_ext) <= margin * cfg.sat_bounds_M(n);
}

/// Parameter adaptation law shared by both observer variants: gradient step
/// on the instantaneous residual plus the recorded-data residuals.
inline Vec weight_derivative(const Mat& gamma3, const Vec& What,
                             const Vec& phi_now, double target_now,
                             const HistoryStack& stack) {
  Vec dW = gamma3 * phi_now * (target_now - What.dot(phi_now));
  for (int j = 0; j < stack.fill_count(); ++j) {
    const Vec phi_j = stack.regressors().col(j);
    dW += gamma3 * phi_j * (stack.targets()(j) - What.dot(phi_j));
  }
  return dW;
}

/// Output-feedback CL-AEO right-hand side (partial-drift form when the plant
/// has a known f0).  y is the x1 measurement.
inline ObserverState observer_derivative(const ObserverConfig& cfg,
                                         const ObserverState& st,
                                         const HistoryStack& stack,
                                         const ParametricPlant& plant,
                                         double y, double u) {
  const int n = plant.n;
  if (st.xhat.size() != n || st.What.size() != plant.m)
    throw ContractError("observer_derivative: state dimension mismatch");
  if (stack.regressor_dim() != plant.m)
    throw ContractError("observer_derivative: stack dimension mismatch");

  const double innov = y - st.xhat(0);
  const Vec g1 = cfg.gamma1(n);

  ObserverState d;
  d.xhat = Vec::Zero(n);
  for (int i = 0; i + 1 < n; ++i) d.xhat(i) = st.xhat(i + 1);
  d.xhat(n - 1) = plant.f0(st.xhat) + st.xhat_ext + plant.control_gain(st.xhat) * u;
  d.xhat += g1 * innov;
  d.xhat_ext = cfg.gamma2(n) * innov;

  const Vec xbar_full = saturated_estimates(cfg, st);
  const Vec xbar = xbar_full.head(n);
  const Vec phi = plant.regressor(xbar);
  if (phi.size() != plant.m)
    throw ContractError("observer_derivative: regressor dimension mismatch");
  d.What = weight_derivative(cfg.learning_rate, st.What, phi, xbar_full(n), stack);
  d.aux_theta = 0.0;
  return d;
}

/// Simplified variant for full state feedback: a scalar filter vartheta on
/// x_n recovers x_{n+1}, and Phi is evaluated at the measured state.  Uses
/// l = gains_L(0) as the filter gain.
inline ObserverState full_state_observer_derivative(const ObserverConfig& cfg,
                                                    const ObserverState& st,
                                                    const HistoryStack& stack,
                                                    const ParametricPlant& plant,
                                                    const Vec& x, double u) {
  const int n = plant.n;
  const double l_over_eps = cfg.gains_L(0) / cfg.epsilon;
  const double xhat_ext = l_over_eps * (x(n - 1) - st.aux_theta);
  const double xbar_ext =
      saturate(xhat_ext, cfg.sat_bounds_M(n), cfg.sat_overshoot);
  const Vec phi = plant.regressor(x);

  ObserverState d;
  d.xhat = Vec::Zero(n);
  d.aux_theta = xhat_ext + plant.control_gain(x) * u;
  d.xhat_ext = 0.0;  // xhat_ext is algebraic in this variant; see estimate below
  d.What = weight_derivative(cfg.learning_rate, st.What, phi, xbar_ext, stack);
  return d;
}

/// Algebraic extended-state estimate of the full-state variant.
inline double full_state_extended_estimate(const ObserverConfig& cfg,
                                           const ObserverState& st,
                                           const Vec& x, int n) {
  return cfg.gains_L(0) / cfg.epsilon * (x(n - 1) - st.aux_theta);
}

struct ScaledErrorDiagnostic {
  Vec eta;  // n+1 entries
};

/// eta_i = (x_i - xhat_i) / eps^{n+1-i}; the extended channel is unscaled.
inline ScaledErrorDiagnostic scaled_error(const ObserverConfig& cfg,
                                          const ObserverState& st,
                                          const Vec& x_true, double x_ext_true) {
  const int n = static_cast<int>(x_true.size());
  ScaledErrorDiagnostic d;
  d.eta = Vec(n + 1);
  for (int i = 0; i < n; ++i)
    d.eta(i) = (x_true(i) - st.xhat(i)) / std::pow(cfg.epsilon, n - i);
  d.eta(n) = x_ext_true - st.xhat_ext;
  return d;
}

}  // namespace claeo
