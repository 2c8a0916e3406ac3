// flock: run flocking scenarios, variant comparisons and the unicycle replay.
//
//   flock run --config scenario.cfg [--key value ...]
//   flock compare --config scenario.cfg --seeds 1 2 3 [--key value ...]
//   flock replay-experiment --seed 1 --out replay/
//   flock version
//
// Exit codes: 0 success, 1 config error, 2 simulation fault, 3 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flock/scenario.hpp"
#include "flock/simulator.hpp"
#include "flock/unicycle.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 1, kSimulationFault = 2, kIoError = 3 };

constexpr const char* kConfigKeys[] = {"model", "n",    "dim",  "seed", "t_end",
                                       "dt",    "radius", "delta", "k", "vmax",
                                       "umax",  "box",  "v_init_max", "decimation", "out"};

struct ScenarioArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "config file (key = value lines)");
  for (const char* key : kConfigKeys) {
    cmd->add_option_function<std::string>(
        std::string("--") + key, [&args, key](const std::string& v) { args.overrides[key] = v; },
        std::string("override `") + key + "`");
  }
}

flock::ScenarioConfig load_config(const ScenarioArgs& args) {
  std::string text;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw flock::IoError(args.config_path, "cannot read config");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  flock::ConfigOverrides overrides(args.overrides.begin(), args.overrides.end());
  return flock::parse_config(text, overrides);
}

int cmd_run(const ScenarioArgs& args) {
  const auto config = load_config(args);
  const auto result = flock::run_scenario(config);
  std::cout << "wrote " << result.trajectory_csv.string() << ", " << result.metrics_csv.string()
            << ", " << result.summary.string() << '\n';
  if (result.fault) {
    std::cerr << "simulation fault: " << *result.fault << '\n';
    return kSimulationFault;
  }
  return kOk;
}

int cmd_compare(const ScenarioArgs& args, const std::vector<std::uint64_t>& seeds) {
  const auto config = load_config(args);
  const auto report = flock::run_comparison(config, seeds);
  const std::string csv = report.to_csv();
  std::filesystem::create_directories(config.output_dir);
  const auto path = config.output_dir / "comparison.csv";
  std::ofstream out(path, std::ios::binary);
  if (!(out << csv)) throw flock::IoError(path, "cannot write comparison report");
  std::cout << csv;
  for (const auto& cell : report.cells) {
    if (cell.fault) return kSimulationFault;
  }
  return kOk;
}

int cmd_replay(std::uint64_t seed, const std::string& out_dir, double k_omega,
               std::optional<double> t_end) {
  flock::unicycle::ReplayConfig config;
  config.seed = seed;
  config.k_omega = k_omega;
  if (t_end) config.params.t_end = *t_end;
  config.params.validate();
  const auto result = flock::unicycle::replay_experiment(config);
  flock::write_replay_outputs(config, result, out_dir);
  const auto& last = result.metrics.back();
  std::cout << "final gamma " << (last.gamma ? flock::format_number(*last.gamma) : "NA")
            << ", max |v| " << result.max_abs_v << " m/s, max |omega| " << result.max_abs_omega
            << " rad/s, wall violations " << result.wall_violations << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Position-based flocking simulator"};
  app.require_subcommand(1);

  ScenarioArgs run_args;
  auto* run = app.add_subcommand("run", "run one scenario and write CSV outputs");
  add_scenario_options(run, run_args);

  ScenarioArgs compare_args;
  std::vector<std::uint64_t> seeds;
  auto* compare = app.add_subcommand("compare", "run all three variants over a list of seeds");
  add_scenario_options(compare, compare_args);
  compare->add_option("--seeds", seeds, "seeds to run")->required()->delimiter(',');

  std::uint64_t replay_seed = 1;
  std::string replay_out = "replay";
  double k_omega = 2.0;
  std::optional<double> replay_t_end;
  auto* replay = app.add_subcommand("replay-experiment", "nine-robot unicycle replay");
  replay->add_option("--seed", replay_seed, "seed for positions and headings");
  replay->add_option("--out", replay_out, "output directory");
  replay->add_option("--k_omega", k_omega, "heading gain (1/s)");
  replay->add_option("--t_end", replay_t_end, "duration (s)");

  auto* version = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*version) {
      std::cout << "flock " << flock::kVersion << '\n';
      return kOk;
    }
    if (*run) return cmd_run(run_args);
    if (*compare) return cmd_compare(compare_args, seeds);
    if (*replay) return cmd_replay(replay_seed, replay_out, k_omega, replay_t_end);
  } catch (const flock::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const flock::SimulationFault& e) {
    std::cerr << "simulation fault: " << e.what() << '\n';
    return kSimulationFault;
  } catch (const flock::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}
