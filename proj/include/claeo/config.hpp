#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "claeo/scenario_defaults.hpp"
#include "claeo/trace_io.hpp"

namespace claeo {

using KeyValues = std::map<std::string, std::string>;

/// Flat key=value file with '#' comments and dotted section prefixes.
inline KeyValues parse_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        " is not key=value: " + line);
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

namespace detail {

inline std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ConfigError("bad numeric value for key " + key + ": " + cell);
    }
  }
  if (out.empty()) throw ConfigError("empty list for key " + key);
  return out;
}

inline Vec parse_vec(const std::string& s, const std::string& key) {
  const auto v = parse_double_list(s, key);
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline double parse_double(const std::string& s, const std::string& key) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for key " + key + ": " + s);
  }
}

inline int parse_int(const std::string& s, const std::string& key) {
  try {
    return std::stoi(s);
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for key " + key + ": " + s);
  }
}

inline bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("bad boolean value for key " + key + ": " + s);
}

inline std::string join(const Vec& v) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_g17(v(i));
  return s;
}

}  // namespace detail

struct ResolvedConfig {
  std::string scenario;
  SimConfig sim;
  std::string warm_csv;  // empty: default warm start (closed-loop scenarios)
};

/// Applies key overrides onto the scenario's default config.  Unknown keys
/// are rejected with a diagnostic naming the key.
inline ResolvedConfig build_config(const KeyValues& kv) {
  using namespace detail;
  ResolvedConfig rc;
  rc.scenario = kv.count("scenario") ? kv.at("scenario") : "fig2";
  if (rc.scenario == "hjb-validate" || rc.scenario == "eps-scaling")
    throw ConfigError("scenario " + rc.scenario +
                      " is an analysis scenario and takes no config overrides");
  rc.sim = make_scenario_config(rc.scenario);
  SimConfig& c = rc.sim;

  for (const auto& [key, val] : kv) {
    if (key == "scenario") continue;
    else if (key == "plant.preset") c.plant_preset = val;
    else if (key == "sim.step_h") c.step_h = parse_double(val, key);
    else if (key == "sim.t_end") c.t_end = parse_double(val, key);
    else if (key == "sim.record_period") c.record_period = parse_double(val, key);
    else if (key == "sim.t_warm") c.t_warm = parse_double(val, key);
    else if (key == "sim.log_decimation") c.log_decimation = parse_int(val, key);
    else if (key == "sim.controller_mode") c.mode = controller_mode_from_string(val);
    else if (key == "sim.record_enabled") c.record_enabled = parse_bool(val, key);
    else if (key == "sim.learner_enabled") c.learner_enabled = parse_bool(val, key);
    else if (key == "sim.x0") c.x0 = parse_vec(val, key);
    else if (key == "sim.gain0") c.gain0 = parse_double(val, key);
    else if (key == "observer.L") c.observer.gains_L = parse_vec(val, key);
    else if (key == "observer.epsilon") c.observer.epsilon = parse_double(val, key);
    else if (key == "observer.M") c.observer.sat_bounds_M = parse_vec(val, key);
    else if (key == "observer.gamma3") {
      const double s = parse_double(val, key);
      const int m = static_cast<int>(c.observer.learning_rate.rows());
      c.observer.learning_rate = s * Mat::Identity(m, m);
    }
    else if (key == "observer.stack_capacity") c.observer.stack_capacity = parse_int(val, key);
    else if (key == "observer.iota") c.observer.sat_overshoot = parse_double(val, key);
    else if (key == "observer.record_innov_tol") c.observer.record_innov_tol = parse_double(val, key);
    else if (key == "learner.k_c1") c.learner.k_c1 = parse_double(val, key);
    else if (key == "learner.k_c2") c.learner.k_c2 = parse_double(val, key);
    else if (key == "learner.k_a1") c.learner.k_a1 = parse_double(val, key);
    else if (key == "learner.k_a2") c.learner.k_a2 = parse_double(val, key);
    else if (key == "learner.gamma") c.learner.gamma = parse_double(val, key);
    else if (key == "learner.beta") c.learner.beta = parse_double(val, key);
    else if (key == "learner.gamma_bar") c.learner.gamma_bar = parse_double(val, key);
    else if (key == "learner.grid_min") c.learner.grid_lo = parse_vec(val, key);
    else if (key == "learner.grid_max") c.learner.grid_hi = parse_vec(val, key);
    else if (key == "learner.grid_count") {
      c.learner.grid_counts.clear();
      for (double v : parse_double_list(val, key))
        c.learner.grid_counts.push_back(static_cast<int>(v));
    }
    else if (key == "stack.warm_csv") rc.warm_csv = val;
    else throw ConfigError("unknown config key: " + key);
  }

  if (c.learner.grid_lo.size() > 0)
    c.learner.grid = make_uniform_grid(c.learner.grid_lo, c.learner.grid_hi,
                                       c.learner.grid_counts);
  c.learner.cost = make_benchmark(c.plant_preset).cost;
  if (!rc.warm_csv.empty()) c.warm_records = read_stack_csv(rc.warm_csv);
  return rc;
}

/// Fills the deterministic default warm start for closed-loop scenarios and
/// runs the construction-time invariant checks.
inline void finalize_config(ResolvedConfig& rc) {
  if (rc.sim.learner_enabled && rc.sim.warm_records.empty() && rc.warm_csv.empty())
    rc.sim.warm_records = default_warm_records();
  rc.sim.validate(make_benchmark(rc.sim.plant_preset));
}

inline SimConfig parse_config(const std::string& path) {
  ResolvedConfig rc = build_config(parse_key_values(path));
  finalize_config(rc);
  return rc.sim;
}

/// Full resolved-key echo; feeding it back through build_config reproduces
/// the run.
inline std::vector<std::pair<std::string, std::string>> echo_config(
    const ResolvedConfig& rc) {
  using namespace detail;
  const SimConfig& c = rc.sim;
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("scenario", rc.scenario);
  out.emplace_back("plant.preset", c.plant_preset);
  out.emplace_back("sim.step_h", format_g17(c.step_h));
  out.emplace_back("sim.t_end", format_g17(c.t_end));
  out.emplace_back("sim.record_period", format_g17(c.record_period));
  out.emplace_back("sim.t_warm", format_g17(c.warmup()));
  out.emplace_back("sim.log_decimation", std::to_string(c.log_decimation));
  out.emplace_back("sim.controller_mode", to_string(c.mode));
  out.emplace_back("sim.record_enabled", c.record_enabled ? "true" : "false");
  out.emplace_back("sim.learner_enabled", c.learner_enabled ? "true" : "false");
  out.emplace_back("sim.x0", join(c.x0));
  out.emplace_back("observer.L", join(c.observer.gains_L));
  out.emplace_back("observer.epsilon", format_g17(c.observer.epsilon));
  out.emplace_back("observer.M", join(c.observer.sat_bounds_M));
  out.emplace_back("observer.gamma3", format_g17(c.observer.learning_rate(0, 0)));
  out.emplace_back("observer.stack_capacity", std::to_string(c.observer.stack_capacity));
  out.emplace_back("observer.iota", format_g17(c.observer.sat_overshoot));
  out.emplace_back("observer.record_innov_tol", format_g17(c.observer.record_innov_tol));
  if (c.learner_enabled) {
    out.emplace_back("sim.gain0", format_g17(c.gain0));
    out.emplace_back("learner.k_c1", format_g17(c.learner.k_c1));
    out.emplace_back("learner.k_c2", format_g17(c.learner.k_c2));
    out.emplace_back("learner.k_a1", format_g17(c.learner.k_a1));
    out.emplace_back("learner.k_a2", format_g17(c.learner.k_a2));
    out.emplace_back("learner.gamma", format_g17(c.learner.gamma));
    out.emplace_back("learner.beta", format_g17(c.learner.beta));
    out.emplace_back("learner.gamma_bar", format_g17(c.learner.gamma_bar));
    if (c.learner.grid_lo.size() > 0) {
      out.emplace_back("learner.grid_min", join(c.learner.grid_lo));
      out.emplace_back("learner.grid_max", join(c.learner.grid_hi));
      std::string counts;
      for (std::size_t i = 0; i < c.learner.grid_counts.size(); ++i)
        counts += (i ? "," : "") + std::to_string(c.learner.grid_counts[i]);
      out.emplace_back("learner.grid_count", counts);
    }
    if (!rc.warm_csv.empty()) out.emplace_back("stack.warm_csv", rc.warm_csv);
  }
  return out;
}

}  // namespace claeo
