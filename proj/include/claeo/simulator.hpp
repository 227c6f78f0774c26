#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "claeo/benchmark.hpp"
#include "claeo/learner.hpp"
#include "claeo/observer.hpp"

namespace claeo {

enum class ControllerMode { scenario_u1, scenario_u2, rl_policy, external };

inline std::string to_string(ControllerMode m) {
  switch (m) {
    case ControllerMode::scenario_u1: return "scenario_u1";
    case ControllerMode::scenario_u2: return "scenario_u2";
    case ControllerMode::rl_policy: return "rl_policy";
    case ControllerMode::external: return "external";
  }
  return "?";
}

inline ControllerMode controller_mode_from_string(const std::string& s) {
  if (s == "scenario_u1") return ControllerMode::scenario_u1;
  if (s == "scenario_u2") return ControllerMode::scenario_u2;
  if (s == "rl_policy") return ControllerMode::rl_policy;
  if (s == "external") return ControllerMode::external;
  throw ConfigError("unknown controller mode: " + s);
}

/// Hand-picked excitation controllers: state feedback plus a probing tone
/// that u1 switches off at t = 5 (finite excitation) and u2 keeps on
/// (persistent excitation).
inline double scenario_control(ControllerMode mode, double t, const Vec& x) {
  const double fb = -0.9 * (std::cos(2.0 * x(0)) + 2.0) * (x(0) + x(1));
  const double probe = 10.0 * std::sin(4.0 * M_PI * t);
  if (mode == ControllerMode::scenario_u1) return t <= 5.0 ? fb + probe : fb;
  if (mode == ControllerMode::scenario_u2) return fb + probe;
  throw ContractError("scenario_control: not a scenario mode");
}

struct SimConfig {
  std::string plant_preset = "benchmark-sin";
  ObserverConfig observer;
  LearnerConfig learner;
  double step_h = 1e-4;
  double t_end = 15.0;
  double record_period = 0.05;
  double t_warm = -1.0;  // < 0: default 50 * eps * |ln eps|
  int log_decimation = 10;
  ControllerMode mode = ControllerMode::scenario_u1;
  bool record_enabled = true;   // offer data to the history stack
  bool learner_enabled = false;
  Vec x0;
  double gain0 = 100.0;  // Gamma(0) = gain0 * I
  std::vector<std::pair<Vec, double>> warm_records;  // pre-loaded stack data
  std::function<double(double, const Vec&)> external_control;

  double warmup() const {
    if (t_warm >= 0.0) return t_warm;
    const double e = observer.epsilon;
    return 50.0 * e * std::abs(std::log(e));
  }

  void validate(const Benchmark& bench) const {
    observer.validate(bench.plant.n, bench.plant.m);
    if (!(step_h > 0.0)) throw ConfigError("sim.step_h must be positive");
    if (!(t_end > 0.0)) throw ConfigError("sim.t_end must be positive");
    if (record_period < step_h)
      throw ConfigError("sim.record_period must be >= sim.step_h");
    if (log_decimation < 1) throw ConfigError("sim.log_decimation must be >= 1");
    const Mat E = observer_error_matrix(observer.gains_L);
    Eigen::EigenSolver<Mat> es(E);
    const double fastest = es.eigenvalues().real().cwiseAbs().maxCoeff();
    const double cap = 2.5 * observer.epsilon / fastest;
    if (step_h > cap)
      throw ConfigError("sim.step_h exceeds stability cap 2.5*eps/|Re lambda_max(E)| = " +
                        std::to_string(cap));
    if (x0.size() != bench.plant.n) throw ConfigError("sim.x0 has wrong dimension");
    if (learner_enabled) {
      learner.validate();
      if (!(gain0 > 0.0) || gain0 > learner.gamma_bar)
        throw ConfigError("sim.gain0 must lie in (0, gamma_bar]");
    }
    if (mode == ControllerMode::external && !external_control)
      throw ConfigError("external mode needs an external controller");
  }
};

struct TraceRow {
  double t = 0.0;
  Vec x, xhat;
  double xhat_ext = 0.0;
  Vec What, theta_c, theta_a;
  double u = 0.0;
  double delta_t = 0.0;
  double a1_metric = 0.0;
  double stack_min_sv = 0.0;
  Vec eta;
  double accumulated_J = 0.0;
  double gain_lmin = 0.0, gain_lmax = 0.0;
  double mu_rho_norm = 0.0;
};

struct SimTrace {
  std::vector<TraceRow> rows;
};

struct SimState {
  Vec x;
  ObserverState obs;
  LearnerState lrn;
};

struct RunResult {
  SimTrace trace;
  bool diverged = false;
  std::string error;
  double t_fail = 0.0;
  HistoryStack stack;
  SimState final_state;
  std::vector<std::string> warnings;
};

namespace detail {

inline SimState axpy(const SimState& a, double h, const SimState& d) {
  SimState r;
  r.x = a.x + h * d.x;
  r.obs.xhat = a.obs.xhat + h * d.obs.xhat;
  r.obs.xhat_ext = a.obs.xhat_ext + h * d.obs.xhat_ext;
  r.obs.What = a.obs.What + h * d.obs.What;
  r.obs.aux_theta = a.obs.aux_theta + h * d.obs.aux_theta;
  r.lrn.theta_c = a.lrn.theta_c + h * d.lrn.theta_c;
  r.lrn.theta_a = a.lrn.theta_a + h * d.lrn.theta_a;
  r.lrn.gain = a.lrn.gain + h * d.lrn.gain;
  return r;
}

inline void accumulate(SimState& acc, double w, const SimState& d) {
  acc.x += w * d.x;
  acc.obs.xhat += w * d.obs.xhat;
  acc.obs.xhat_ext += w * d.obs.xhat_ext;
  acc.obs.What += w * d.obs.What;
  acc.obs.aux_theta += w * d.obs.aux_theta;
  acc.lrn.theta_c += w * d.lrn.theta_c;
  acc.lrn.theta_a += w * d.lrn.theta_a;
  acc.lrn.gain += w * d.lrn.gain;
}

inline bool state_ok(const SimState& s) {
  auto ok = [](const Vec& v) { return v.allFinite() && v.cwiseAbs().maxCoeff() < 1e12; };
  auto oks = [](double v) { return std::isfinite(v) && std::abs(v) < 1e12; };
  return ok(s.x) && ok(s.obs.xhat) && oks(s.obs.xhat_ext) && ok(s.obs.What) &&
         oks(s.obs.aux_theta) && ok(s.lrn.theta_c) && ok(s.lrn.theta_a) &&
         s.lrn.gain.allFinite() && s.lrn.gain.cwiseAbs().maxCoeff() < 1e12;
}

}  // namespace detail

/// Integrates the coupled plant / observer / learner dynamics with classical
/// RK4.  Discrete events (data recording, gain-matrix projection) resolve
/// between steps so the right-hand side stays smooth within a step.
class Simulator {
 public:
  explicit Simulator(SimConfig cfg)
      : cfg_(std::move(cfg)), bench_(make_benchmark(cfg_.plant_preset)) {
    cfg_.validate(bench_);
    if (cfg_.learner_enabled)
      grid_ = std::make_unique<GridWorkspace>(bench_.basis, bench_.plant,
                                              bench_.cost, cfg_.learner.grid);
  }

  const Benchmark& benchmark() const { return bench_; }
  const SimConfig& config() const { return cfg_; }

  double control(double t, const SimState& s) const {
    switch (cfg_.mode) {
      case ControllerMode::scenario_u1:
      case ControllerMode::scenario_u2:
        return scenario_control(cfg_.mode, t, s.x);
      case ControllerMode::rl_policy: {
        // Output feedback: the policy acts on the saturated estimate only.
        const Vec xbar = saturated_estimates(cfg_.observer, s.obs).head(bench_.plant.n);
        return policy_estimate(bench_.basis, bench_.plant, bench_.cost,
                               s.lrn.theta_a, xbar);
      }
      case ControllerMode::external:
        return cfg_.external_control(t, s.x);
    }
    return 0.0;
  }

  SimState derivative(double t, const SimState& s, const HistoryStack& stack) const {
    const double u = control(t, s);
    SimState d;
    d.x = bench_.plant.derivative(s.x, u);
    d.obs = observer_derivative(cfg_.observer, s.obs, stack, bench_.plant, s.x(0), u);
    if (cfg_.learner_enabled) {
      const Vec xbar = saturated_estimates(cfg_.observer, s.obs).head(bench_.plant.n);
      const BellmanEval be =
          bellman_error(bench_.basis, bench_.plant, s.obs.What, bench_.cost,
                        s.lrn.theta_c, s.lrn.theta_a, xbar);
      const GridData gd = grid_->evaluate(s.obs.What, cfg_.learner, s.lrn);
      d.lrn.theta_c = critic_derivative(cfg_.learner, s.lrn, be.mu, be.delta, gd);
      d.lrn.gain = gain_matrix_derivative(cfg_.learner, s.lrn, be.mu);
      d.lrn.theta_a = actor_derivative(cfg_.learner, s.lrn, be.mu, be.G, gd);
    } else {
      d.lrn.theta_c = Vec::Zero(s.lrn.theta_c.size());
      d.lrn.theta_a = Vec::Zero(s.lrn.theta_a.size());
      d.lrn.gain = Mat::Zero(s.lrn.gain.rows(), s.lrn.gain.cols());
    }
    return d;
  }

  /// One classical RK4 step; the history stack is frozen across the step.
  SimState step(const SimState& s, double t, const HistoryStack& stack) const {
    const double h = cfg_.step_h;
    const SimState k1 = derivative(t, s, stack);
    const SimState k2 = derivative(t + 0.5 * h, detail::axpy(s, 0.5 * h, k1), stack);
    const SimState k3 = derivative(t + 0.5 * h, detail::axpy(s, 0.5 * h, k2), stack);
    const SimState k4 = derivative(t + h, detail::axpy(s, h, k3), stack);
    SimState incr = k1;
    detail::accumulate(incr, 2.0, k2);
    detail::accumulate(incr, 2.0, k3);
    detail::accumulate(incr, 1.0, k4);
    SimState out = detail::axpy(s, h / 6.0, incr);
    if (cfg_.learner_enabled) {
      // The continuous dynamics preserve symmetry; the discretization drift
      // is removed here.  Crossing the norm cap slides along the boundary.
      out.lrn.gain = 0.5 * (out.lrn.gain + out.lrn.gain.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Mat> es(out.lrn.gain);
      const double lmax = es.eigenvalues().maxCoeff();
      if (lmax > cfg_.learner.gamma_bar)
        out.lrn.gain *= cfg_.learner.gamma_bar / lmax;
    }
    return out;
  }

  RunResult run() const {
    const int n = bench_.plant.n;
    const int m = bench_.plant.m;
    const int r = bench_.basis.r;
    const double h = cfg_.step_h;
    const std::int64_t n_steps = std::llround(cfg_.t_end / h);
    const std::int64_t record_every =
        std::max<std::int64_t>(1, std::llround(cfg_.record_period / h));
    const double t_warm = cfg_.warmup();

    RunResult res;
    res.stack = HistoryStack(m, cfg_.observer.stack_capacity);
    for (const auto& [phi, target] : cfg_.warm_records) res.stack.offer(phi, target);

    SimState s;
    s.x = cfg_.x0;
    s.obs = ObserverState::zero(n, m);
    s.lrn = LearnerState::zero(r, cfg_.gain0);

    double J = 0.0;
    double prev_cost = bench_.cost.running(s.x, control(0.0, s));
    bool warned_a1 = false, warned_cap = false;

    auto log_row = [&](double t) {
      TraceRow row;
      row.t = t;
      row.x = s.x;
      row.xhat = s.obs.xhat;
      row.xhat_ext = s.obs.xhat_ext;
      row.What = s.obs.What;
      row.theta_c = s.lrn.theta_c;
      row.theta_a = s.lrn.theta_a;
      row.u = control(t, s);
      row.stack_min_sv = res.stack.min_singular_value();
      const double x_ext_true = bench_.plant.true_weights.dot(bench_.plant.regressor(s.x));
      row.eta = scaled_error(cfg_.observer, s.obs, s.x, x_ext_true).eta;
      row.accumulated_J = J;
      if (cfg_.learner_enabled) {
        const Vec xbar = saturated_estimates(cfg_.observer, s.obs).head(n);
        const BellmanEval be =
            bellman_error(bench_.basis, bench_.plant, s.obs.What, bench_.cost,
                          s.lrn.theta_c, s.lrn.theta_a, xbar);
        row.delta_t = be.delta;
        row.mu_rho_norm = be.mu.norm() / normalizer(cfg_.learner, be.mu);
        const GridData gd = grid_->evaluate(s.obs.What, cfg_.learner, s.lrn);
        row.a1_metric = assumption_a1_metric(gd);
        Eigen::SelfAdjointEigenSolver<Mat> es(s.lrn.gain);
        row.gain_lmin = es.eigenvalues().minCoeff();
        row.gain_lmax = es.eigenvalues().maxCoeff();
        if (row.a1_metric < 1e-10 && !warned_a1) {
          res.warnings.push_back("assumption A1 metric below floor 1e-10 at t=" +
                                 std::to_string(t));
          warned_a1 = true;
        }
        if (row.gain_lmax >= cfg_.learner.gamma_bar * (1.0 - 1e-12) && !warned_cap) {
          res.warnings.push_back("gain matrix norm cap active from t=" +
                                 std::to_string(t));
          warned_cap = true;
        }
      }
      res.trace.rows.push_back(std::move(row));
    };

    log_row(0.0);
    for (std::int64_t k = 0; k < n_steps; ++k) {
      const double t = k * h;
      SimState next = step(s, t, res.stack);
      const double t_next = (k + 1) * h;
      if (!detail::state_ok(next)) {
        res.diverged = true;
        res.t_fail = t_next;
        res.error = "state diverged at t=" + std::to_string(t_next);
        res.final_state = s;
        return res;
      }
      s = std::move(next);
      const double cost_now = bench_.cost.running(s.x, control(t_next, s));
      J += 0.5 * h * (prev_cost + cost_now);
      prev_cost = cost_now;
      const double eps = cfg_.observer.epsilon;
      if (cfg_.record_enabled && t_next >= t_warm &&
          (k + 1) % record_every == 0 &&
          estimates_unsaturated(cfg_.observer, s.obs) &&
          std::abs(s.x(0) - s.obs.xhat(0)) <=
              cfg_.observer.record_innov_tol * eps * eps) {
        const Vec xbar_full = saturated_estimates(cfg_.observer, s.obs);
        res.stack.offer(bench_.plant.regressor(xbar_full.head(n)), xbar_full(n));
      }
      if ((k + 1) % cfg_.log_decimation == 0) log_row(t_next);
    }
    res.final_state = s;
    return res;
  }

 private:
  SimConfig cfg_;
  Benchmark bench_;
  std::unique_ptr<GridWorkspace> grid_;
};

inline RunResult run(const SimConfig& cfg) { return Simulator(cfg).run(); }

/// sup over rows with t in [t0, t1] of max_i |x_i - xhat_i|.
inline double sup_state_estimation_error(const SimTrace& trace, double t0, double t1) {
  double sup = 0.0;
  for (const auto& row : trace.rows) {
    if (row.t < t0 || row.t > t1) continue;
    sup = std::max(sup, (row.x - row.xhat).cwiseAbs().maxCoeff());
  }
  return sup;
}

/// First time ||W - What|| drops below the threshold (and stays irrelevant);
/// returns nullopt if it never does.
inline std::optional<double> first_passage_weight_error(const SimTrace& trace,
                                                        const Vec& W,
                                                        double threshold) {
  for (const auto& row : trace.rows)
    if ((W - row.What).norm() < threshold) return row.t;
  return std::nullopt;
}

}  // namespace claeo
