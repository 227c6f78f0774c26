#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "claeo/config.hpp"

namespace claeo {

struct RunManifest {
  std::string scenario;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::map<std::string, std::string> outputs;
  std::map<std::string, double> metrics;
  std::vector<std::string> warnings;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

inline void write_manifest(const RunManifest& man, const std::string& path) {
  nlohmann::json j;
  j["scenario"] = man.scenario;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : man.config_echo) cfg[k] = v;
  j["config"] = cfg;
  j["outputs"] = man.outputs;
  j["metrics"] = man.metrics;
  j["warnings"] = man.warnings;
  j["error"] = man.error;
  std::ofstream out(path);
  if (!out) throw ContractError("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

namespace detail {

inline void emit_projection(const std::string& path,
                            const std::vector<std::string>& header,
                            const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw ContractError("cannot write projection: " + path);
  out << "#";
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : " ") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_g17(row[i]);
    out << "\n";
  }
}

inline RunManifest run_sim_scenario(const ResolvedConfig& rc,
                                    const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const Benchmark bench = make_benchmark(rc.sim.plant_preset);

  RunManifest man;
  man.scenario = rc.scenario;
  man.config_echo = echo_config(rc);
  const std::string trace_path = out_dir + "/" + rc.scenario + "-trace.csv";
  const std::string stack_path = out_dir + "/" + rc.scenario + "-stack.csv";
  man.outputs["trace"] = trace_path;

  RunResult res = run(rc.sim);
  man.warnings = res.warnings;
  write_trace_csv(trace_path, res.trace, bench.plant.n, bench.plant.m, bench.basis.r);
  write_stack_csv(stack_path, res.stack);
  man.outputs["stack"] = stack_path;

  if (res.diverged) {
    man.error = res.error;
    man.metrics["t_fail"] = res.t_fail;
    return man;
  }

  const TraceRow& last = res.trace.rows.back();
  man.metrics["final_weight_error"] = (bench.plant.true_weights - last.What).norm();
  man.metrics["final_state_norm"] = last.x.norm();
  man.metrics["sup_state_error_from_1s"] =
      sup_state_estimation_error(res.trace, 1.0, rc.sim.t_end);
  man.metrics["accumulated_cost"] = last.accumulated_J;
  if (auto fp = first_passage_weight_error(res.trace, bench.plant.true_weights, 0.1))
    man.metrics["first_passage_W_0p1"] = *fp;

  if (rc.sim.learner_enabled) {
    man.metrics["final_theta_a_error"] = (bench.ideal_theta - last.theta_a).norm();
    man.metrics["final_theta_c_error"] = (bench.ideal_theta - last.theta_c).norm();
    double min_a1 = std::numeric_limits<double>::infinity();
    double max_lmax = 0.0, min_lmin = std::numeric_limits<double>::infinity();
    for (const auto& row : res.trace.rows) {
      min_a1 = std::min(min_a1, row.a1_metric);
      max_lmax = std::max(max_lmax, row.gain_lmax);
      min_lmin = std::min(min_lmin, row.gain_lmin);
    }
    man.metrics["min_a1_metric"] = min_a1;
    man.metrics["max_gain_lmax"] = max_lmax;
    man.metrics["min_gain_lmin"] = min_lmin;
  }

  // Per-figure plot projections.
  if (rc.scenario == "fig2" || rc.scenario == "fig3a" || rc.scenario == "fig3b") {
    std::vector<std::vector<double>> rows;
    for (const auto& r : res.trace.rows)
      rows.push_back({r.t, r.What(0), r.What(1), bench.plant.true_weights(0),
                      bench.plant.true_weights(1)});
    const std::string p = out_dir + "/" + rc.scenario + "-weights.csv";
    emit_projection(p, {"t", "What1", "What2", "W1", "W2"}, rows);
    man.outputs["weights"] = p;
  }
  if (rc.sim.learner_enabled) {
    std::vector<std::vector<double>> th, a1;
    for (const auto& r : res.trace.rows) {
      th.push_back({r.t, r.theta_a(0), r.theta_a(1), r.theta_a(2),
                    bench.ideal_theta(0), bench.ideal_theta(1), bench.ideal_theta(2)});
      a1.push_back({r.t, r.a1_metric});
    }
    const std::string p5 = out_dir + "/" + rc.scenario + "-actor-weights.csv";
    const std::string p7 = out_dir + "/" + rc.scenario + "-a1-metric.csv";
    emit_projection(p5, {"t", "theta_a1", "theta_a2", "theta_a3",
                         "Theta1", "Theta2", "Theta3"}, th);
    emit_projection(p7, {"t", "a1_metric"}, a1);
    man.outputs["actor_weights"] = p5;
    man.outputs["a1_metric"] = p7;
  }

  // The non-CL comparison also reports the CL-AEO convergence speed.
  if (rc.scenario == "fig3b") {
    RunResult cl = run(make_scenario_config("fig2"));
    auto cl_fp = first_passage_weight_error(cl.trace, bench.plant.true_weights, 0.1);
    auto fp = first_passage_weight_error(res.trace, bench.plant.true_weights, 0.1);
    if (cl_fp) man.metrics["cl_first_passage_W_0p1"] = *cl_fp;
    if (fp && cl_fp && *cl_fp > 0.0)
      man.metrics["first_passage_ratio"] = *fp / *cl_fp;
  }
  return man;
}

inline RunManifest run_hjb_validate(const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  RunManifest man;
  man.scenario = "hjb-validate";
  man.config_echo = {{"scenario", "hjb-validate"},
                     {"points", "10000"},
                     {"domain", "[-10,10]^2"},
                     {"seed", "42"}};
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (const std::string id : {"benchmark-sin", "benchmark-cos"}) {
    const Benchmark b = make_benchmark(id);
    double max_res = 0.0;
    for (int i = 0; i < 10000; ++i) {
      Vec x(2);
      x << dist(rng), dist(rng);
      const Vec vx = b.analytic.value_gradient(x);
      const double u = b.analytic.policy(x);
      max_res = std::max(max_res, std::abs(hjb_residual(b.plant, b.cost, vx, u, x)));
    }
    man.metrics["max_residual_" + id.substr(10)] = max_res;
  }
  const auto t1 = std::chrono::steady_clock::now();
  man.metrics["runtime_seconds"] =
      std::chrono::duration<double>(t1 - t0).count();
  write_manifest(man, out_dir + "/hjb-validate-manifest.json");
  man.outputs["manifest"] = out_dir + "/hjb-validate-manifest.json";
  return man;
}

inline RunManifest run_eps_scaling(const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  RunManifest man;
  man.scenario = "eps-scaling";
  man.config_echo = {{"scenario", "eps-scaling"},
                     {"eps_values", "0.001,0.002"},
                     {"window", "[1,5]"},
                     {"sim.controller_mode", "scenario_u2"}};
  const double eps_values[2] = {1e-3, 2e-3};
  double sup[2] = {0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    SimConfig cfg = observer_baseline_config();
    cfg.mode = ControllerMode::scenario_u2;
    cfg.observer.epsilon = eps_values[i];
    cfg.step_h = eps_values[i] / 10.0;
    cfg.t_end = 5.0;
    RunResult res = run(cfg);
    if (res.diverged) {
      man.error = res.error;
      write_manifest(man, out_dir + "/eps-scaling-manifest.json");
      return man;
    }
    sup[i] = sup_state_estimation_error(res.trace, 1.0, 5.0);
  }
  man.metrics["sup_error_eps_1e-3"] = sup[0];
  man.metrics["sup_error_eps_2e-3"] = sup[1];
  man.metrics["sup_error_ratio"] = sup[1] / sup[0];
  write_manifest(man, out_dir + "/eps-scaling-manifest.json");
  man.outputs["manifest"] = out_dir + "/eps-scaling-manifest.json";
  return man;
}

}  // namespace detail

/// Runs a named scenario or a fully resolved config, writing trace CSV and a
/// manifest (the manifest is written even when the run diverges).
inline RunManifest run_scenario_config(const ResolvedConfig& rc,
                                       const std::string& out_dir) {
  RunManifest man = detail::run_sim_scenario(rc, out_dir);
  write_manifest(man, out_dir + "/" + rc.scenario + "-manifest.json");
  man.outputs["manifest"] = out_dir + "/" + rc.scenario + "-manifest.json";
  return man;
}

inline RunManifest run_scenario(const std::string& name, const std::string& out_dir) {
  if (name == "hjb-validate") return detail::run_hjb_validate(out_dir);
  if (name == "eps-scaling") return detail::run_eps_scaling(out_dir);
  ResolvedConfig rc;
  rc.scenario = name;
  rc.sim = make_scenario_config(name);
  finalize_config(rc);
  return run_scenario_config(rc, out_dir);
}

}  // namespace claeo
