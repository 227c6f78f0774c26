// claeo: scenario runner for the CL-AEO / RL simulation library.
//
// Verbs:
//   claeo run <scenario|config-path>   run and write trace + manifest
//   claeo validate <config-path>       parse and check a config file
//   claeo list-scenarios               print known scenario names
//
// CLAEO_OUT_DIR overrides the output directory (default ./out).
// Exit codes: 0 success, 2 config error, 3 divergence.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "claeo/claeo.hpp"

namespace {

std::string output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("CLAEO_OUT_DIR")) return env;
  return "out";
}

bool is_scenario_name(const std::string& s) {
  for (const auto& name : claeo::list_scenarios())
    if (name == s) return true;
  return false;
}

void print_manifest_summary(const claeo::RunManifest& man) {
  std::cout << "scenario: " << man.scenario << "\n";
  for (const auto& [k, v] : man.outputs) std::cout << "  " << k << ": " << v << "\n";
  for (const auto& [k, v] : man.metrics) std::cout << "  " << k << " = " << v << "\n";
  for (const auto& w : man.warnings) std::cout << "  warning: " << w << "\n";
  if (!man.ok()) std::cout << "  error: " << man.error << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CL-AEO joint state-parameter estimation and RL simulation"};
  app.require_subcommand(1);

  std::string target, out_flag;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario or config file");
  run_cmd->add_option("target", target, "Scenario name or config path")->required();
  run_cmd->add_option("-o,--out", out_flag, "Output directory");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Validate a config file");
  validate_cmd->add_option("config", validate_path, "Config path")->required();

  app.add_subcommand("list-scenarios", "List known scenario names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-scenarios")) {
      for (const auto& name : claeo::list_scenarios()) std::cout << name << "\n";
      return 0;
    }
    if (app.got_subcommand("validate")) {
      claeo::ResolvedConfig rc = claeo::build_config(claeo::parse_key_values(validate_path));
      claeo::finalize_config(rc);
      std::cout << "ok: scenario " << rc.scenario << "\n";
      for (const auto& [k, v] : claeo::echo_config(rc))
        std::cout << "  " << k << "=" << v << "\n";
      return 0;
    }
    // run
    const std::string out_dir = output_dir(out_flag);
    claeo::RunManifest man;
    if (is_scenario_name(target)) {
      man = claeo::run_scenario(target, out_dir);
    } else if (std::filesystem::exists(target)) {
      claeo::ResolvedConfig rc = claeo::build_config(claeo::parse_key_values(target));
      claeo::finalize_config(rc);
      man = claeo::run_scenario_config(rc, out_dir);
    } else {
      std::cerr << "error: '" << target
                << "' is neither a known scenario nor an existing config file\n";
      return 2;
    }
    print_manifest_summary(man);
    return man.ok() ? 0 : 3;
  } catch (const claeo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const claeo::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
