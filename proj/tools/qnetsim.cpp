// Scenario runner CLI: executes one registered experiment and writes its CSV.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qnet/qnet.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qnetsim - hierarchical quantum network simulator"};

  std::string scenario;
  std::string config_path;
  std::uint64_t seed = 1;
  int trials = -1;
  std::string out_path;
  bool list = false;

  app.add_option("--scenario", scenario, "scenario name (see --list)");
  app.add_option("--config", config_path, "scenario config file (sectioned key=value)");
  app.add_option("--seed", seed, "master RNG seed");
  app.add_option("--trials", trials, "trial count override");
  app.add_option("--out", out_path, "output CSV path (default: stdout)");
  app.add_flag("--list", list, "list registered scenarios");

  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const std::string& name : qnet::scenario_names()) std::cout << name << "\n";
    return 0;
  }
  if (scenario.empty()) {
    std::cerr << "error: --scenario is required (try --list)\n";
    return 2;
  }

  try {
    qnet::ScenarioParams params = qnet::default_scenario_params(scenario);
    params.seed = seed;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot open config file " << config_path << "\n";
        return 2;
      }
      std::stringstream buf;
      buf << in.rdbuf();
      qnet::apply_scenario_config(params, buf.str(), config_path);
    }
    if (trials == 0) {
      std::cerr << "error: trials must be positive\n";
      return 2;
    }
    if (trials > 0) params.trials = trials;

    const std::vector<qnet::CsvRow> rows = qnet::run_scenario(params);
    const std::string csv = qnet::to_csv(rows);
    if (out_path.empty()) {
      std::cout << csv;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "error: cannot open output file " << out_path << "\n";
        return 2;
      }
      out << csv;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
