#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "omnisim/diag.hpp"
#include "omnisim/scenario.hpp"

// Command-line entry point.
//   omnisim run (--config FILE | --scenario NAME) [--out-dir DIR] [overrides]
//   omnisim list-scenarios
// Exit codes: 0 success, 1 configuration error, 2 runtime fault.

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw omnisim::ConfigError("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"omnidirectional hexacopter flight simulator"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "simulate one scenario");
  std::string config_path, scenario_name, out_dir;
  double duration = -1.0, dt_phys = -1.0, dt_ctrl = -1.0;
  long long seed = -1;
  auto* config_opt =
      run_cmd->add_option("--config", config_path, "scenario config file");
  run_cmd->add_option("--scenario", scenario_name, "built-in scenario name")
      ->excludes(config_opt);
  run_cmd->add_option("--out-dir", out_dir,
                      "directory for log.csv and metrics.txt");
  run_cmd->add_option("--seed", seed, "override the scenario seed");
  run_cmd->add_option("--duration", duration, "override duration [s]");
  run_cmd->add_option("--dt-phys", dt_phys, "override physics step [s]");
  run_cmd->add_option("--dt-ctrl", dt_ctrl, "override control step [s]");

  auto* list_cmd =
      app.add_subcommand("list-scenarios", "print built-in scenario names");

  CLI11_PARSE(app, argc, argv);

  if (list_cmd->parsed()) {
    for (const std::string& name : omnisim::builtin_scenario_names()) {
      std::cout << name << "\n";
    }
    return 0;
  }

  try {
    omnisim::ScenarioConfig config;
    if (!config_path.empty()) {
      config = omnisim::parse_config(read_file(config_path));
    } else if (!scenario_name.empty()) {
      config = omnisim::builtin_scenario(scenario_name);
    } else {
      throw omnisim::ConfigError("run requires --config or --scenario");
    }
    if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
    if (duration > 0.0) config.duration = duration;
    if (dt_phys > 0.0) config.dt_phys = dt_phys;
    if (dt_ctrl > 0.0) config.dt_ctrl = dt_ctrl;

    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      config.csv_path = out_dir + "/log.csv";
      config.metrics_path = out_dir + "/metrics.txt";
      // Resolved config snapshot: a run is reproducible from its own output.
      std::ofstream snapshot(out_dir + "/config.txt", std::ios::binary);
      snapshot << omnisim::config_to_text(config);
    }

    const omnisim::RunResult result = omnisim::run(config);
    omnisim::write_outputs(result, config.csv_path, config.metrics_path);
    std::cout << result.metrics.to_text();
    if (result.fault) {
      std::cerr << "fault: " << *result.fault << "\n";
      return 2;
    }
    return 0;
  } catch (const omnisim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
