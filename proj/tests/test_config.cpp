#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "claeo/config.hpp"

using namespace claeo;

namespace {

struct TempFile {
  std::string path;
  TempFile(const std::string& name, const std::string& content) : path(name) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("key=value parsing") {
  TempFile f("cfg_parse_test.cfg",
             "# leading comment\n"
             "scenario = fig2   # trailing comment\n"
             "\n"
             "sim.t_end=2.5\n");
  const KeyValues kv = parse_key_values(f.path);
  CHECK(kv.size() == 2);
  CHECK(kv.at("scenario") == "fig2");
  CHECK(kv.at("sim.t_end") == "2.5");
}

TEST_CASE("missing file and malformed lines are rejected") {
  CHECK_THROWS_AS(parse_key_values("does_not_exist.cfg"), ConfigError);
  TempFile f("cfg_bad_line_test.cfg", "just some words\n");
  CHECK_THROWS_AS(parse_key_values(f.path), ConfigError);
}

TEST_CASE("empty config resolves to the observer baseline") {
  TempFile f("cfg_empty_test.cfg", "");
  ResolvedConfig rc = build_config(parse_key_values(f.path));
  CHECK(rc.scenario == "fig2");
  CHECK(rc.sim.plant_preset == "benchmark-sin");
  CHECK(rc.sim.observer.epsilon == 1e-3);
  CHECK(rc.sim.observer.gains_L == observer_baseline_config().observer.gains_L);
  CHECK(rc.sim.step_h == 1e-4);
  CHECK(rc.sim.mode == ControllerMode::scenario_u1);
  CHECK_FALSE(rc.sim.learner_enabled);
  finalize_config(rc);  // baseline must be self-consistent
}

TEST_CASE("scenario presets") {
  CHECK_FALSE(make_scenario_config("fig3a").record_enabled);
  CHECK(make_scenario_config("fig3b").mode == ControllerMode::scenario_u2);
  CHECK(make_scenario_config("fig4-7").learner_enabled);
  CHECK(make_scenario_config("fig4-7").learner.grid.size() == 121);
  CHECK(make_scenario_config("fig8").learner.k_c2 == 0.0);
  CHECK_THROWS_AS(make_scenario_config("hjb-validate"), ConfigError);
  CHECK_THROWS_AS(make_scenario_config("fig99"), ConfigError);
  CHECK(list_scenarios().size() == 7);
}

TEST_CASE("overrides apply on top of the scenario") {
  TempFile f("cfg_override_test.cfg",
             "scenario = fig2\n"
             "plant.preset = benchmark-cos\n"
             "observer.epsilon = 0.01\n"
             "sim.step_h = 0.001\n"
             "sim.x0 = 0.5,-0.5\n"
             "observer.gamma3 = 1.25\n");
  ResolvedConfig rc = build_config(parse_key_values(f.path));
  CHECK(rc.sim.plant_preset == "benchmark-cos");
  CHECK(rc.sim.observer.epsilon == 0.01);
  CHECK(rc.sim.x0(1) == -0.5);
  CHECK(rc.sim.observer.learning_rate(1, 1) == 1.25);
  finalize_config(rc);
}

TEST_CASE("unknown keys are rejected by name") {
  TempFile f("cfg_unknown_test.cfg", "observer.espilon = 0.01\n");
  try {
    build_config(parse_key_values(f.path));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("observer.espilon") != std::string::npos);
  }
}

TEST_CASE("non-Hurwitz gains are rejected at validation") {
  TempFile f("cfg_hurwitz_test.cfg", "observer.L = -1,0,0\n");
  ResolvedConfig rc = build_config(parse_key_values(f.path));
  try {
    finalize_config(rc);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("Hurwitz") != std::string::npos);
  }
}

TEST_CASE("step size over the stability cap is rejected") {
  TempFile f("cfg_cap_test.cfg", "sim.step_h = 0.01\n");  // eps stays 1e-3
  ResolvedConfig rc = build_config(parse_key_values(f.path));
  CHECK_THROWS_AS(finalize_config(rc), ConfigError);
}

TEST_CASE("analysis scenarios take no overrides") {
  TempFile f("cfg_analysis_test.cfg", "scenario = hjb-validate\n");
  CHECK_THROWS_AS(build_config(parse_key_values(f.path)), ConfigError);
}

TEST_CASE("config echo reproduces the run configuration") {
  TempFile f("cfg_echo_test.cfg",
             "scenario = fig8\n"
             "observer.epsilon = 0.01\n"
             "sim.step_h = 0.001\n"
             "sim.t_end = 0.125\n"
             "learner.gamma = 0.375\n");
  ResolvedConfig rc = build_config(parse_key_values(f.path));
  const auto echo = echo_config(rc);
  std::string round;
  for (const auto& [k, v] : echo) round += k + " = " + v + "\n";
  TempFile g("cfg_echo_round_test.cfg", round);
  ResolvedConfig rc2 = build_config(parse_key_values(g.path));
  CHECK(rc2.scenario == rc.scenario);
  CHECK(rc2.sim.observer.epsilon == rc.sim.observer.epsilon);
  CHECK(rc2.sim.step_h == rc.sim.step_h);
  CHECK(rc2.sim.t_end == rc.sim.t_end);
  CHECK(rc2.sim.learner.gamma == rc.sim.learner.gamma);
  CHECK(rc2.sim.learner.k_c2 == 0.0);
  CHECK(rc2.sim.x0 == rc.sim.x0);
}

TEST_CASE("warm-start CSV feeds the stack") {
  HistoryStack s(2, 5);
  Vec phi(2);
  phi << 0.25, -1.5;
  s.offer(phi, 3.0);
  write_stack_csv("cfg_warm_test.csv", s);
  TempFile f("cfg_warm_cfg_test.cfg",
             "scenario = fig4-7\n"
             "stack.warm_csv = cfg_warm_test.csv\n");
  ResolvedConfig rc = build_config(parse_key_values(f.path));
  REQUIRE(rc.sim.warm_records.size() == 1);
  CHECK(rc.sim.warm_records[0].first == phi);
  CHECK(rc.sim.warm_records[0].second == 3.0);
  std::remove("cfg_warm_test.csv");
}

TEST_CASE("trace CSV round trip is exact") {
  SimTrace trace;
  TraceRow row;
  row.t = 1.0 / 3.0;
  row.x = Vec(2);
  row.x << 0.1, -2.0 / 7.0;
  row.xhat = Vec::Zero(2);
  row.xhat_ext = 1e-17;
  row.What = Vec(2);
  row.What << -1.5, M_PI;
  row.theta_c = Vec::Zero(3);
  row.theta_a = Vec::Zero(3);
  row.eta = Vec(3);
  row.eta << 1e300, -1e-300, 0.0;
  row.u = std::sqrt(2.0);
  trace.rows.push_back(row);
  write_trace_csv("cfg_trace_test.csv", trace, 2, 2, 3);
  const SimTrace back = read_trace_csv("cfg_trace_test.csv", 2, 2, 3);
  REQUIRE(back.rows.size() == 1);
  CHECK(flatten_row(back.rows[0]) == flatten_row(trace.rows[0]));
  std::remove("cfg_trace_test.csv");
}
