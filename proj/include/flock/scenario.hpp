#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flock/metrics.hpp"
#include "flock/state.hpp"
#include "flock/unicycle.hpp"

namespace flock {

inline constexpr std::string_view kVersion = "0.1.0";

/// Everything needed to reproduce one run.
struct ScenarioConfig {
  ModelParams params;
  std::size_t n = 0;
  int dim = 2;
  double box = 25.0;
  double v_init_max = 1.0;
  std::uint64_t seed = 0;
  std::size_t decimation = 1;
  std::filesystem::path output_dir;
};

/// Bad config document or override. line() is 0 for command-line overrides
/// and for keys that are missing altogether.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, std::size_t line, const std::string& what);
  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  IoError(std::filesystem::path path, const std::string& what);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Parses the line-oriented `key = value` format (`#` starts a comment).
/// Overrides are applied on top of the document. Keys: model, n, dim, seed,
/// t_end, dt, radius, delta, k, vmax, umax, box, v_init_max, decimation, out.
/// Defaults: dim=2, dt=0.05, decimation=1, box=25, v_init_max=1.0; every
/// other key is required.
ScenarioConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});

/// Renders a config back into the document format parse_config reads.
std::string format_config(const ScenarioConfig& config);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

// CSV headers
std::string trajectory_header(int dim);
inline constexpr std::string_view kMetricsHeader =
    "t,gamma,dist_min,dist_mean,dist_max,speed_mean,cohesion_radius,pairwise_var";

/// Appends one trajectory row per agent of `state`.
void append_trajectory_rows(std::string& out, const SwarmState& state);
/// Appends one metrics row; undefined metrics are written as `NA`.
void append_metrics_row(std::string& out, const metrics::MetricsRow& row);

struct TrajectoryRecord {
  double time = 0.0;
  std::vector<AgentState> agents;
};

/// Reads a trajectory CSV written by run_scenario back into per-time
/// agent lists. Throws IoError on unreadable or malformed files.
std::vector<TrajectoryRecord> read_trajectory_csv(const std::filesystem::path& path);

struct ScenarioResult {
  std::filesystem::path trajectory_csv;
  std::filesystem::path metrics_csv;
  std::filesystem::path summary;
  std::vector<metrics::MetricsRow> metrics;  // one row per step
  std::optional<std::string> fault;          // set when the simulation aborted
  std::optional<double> fault_time;
};

/// Samples the initial state, runs it and writes trajectory.csv,
/// metrics.csv and summary.txt into config.output_dir. Simulation faults
/// are recorded in the summary and result, not thrown. Throws IoError.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Per-step metrics for one in-memory run, without writing files.
std::vector<metrics::MetricsRow> simulate_metrics(const SwarmState& initial,
                                                  const ModelParams& params);

/// Mean of a metric over rows with time in [from, to]; empty if none defined.
std::optional<double> window_mean(std::span<const metrics::MetricsRow> rows, double from,
                                  double to, double (*field)(const metrics::MetricsRow&));

double gamma_or_nan(const metrics::MetricsRow& row);
double dist_mean_or_nan(const metrics::MetricsRow& row);
double cohesion_of(const metrics::MetricsRow& row);

struct ComparisonCell {
  std::uint64_t seed = 0;
  Variant variant = Variant::VelocityBased;
  std::optional<std::string> fault;
  double final_gamma = 0.0;       // mean gamma over the last 20% of the run
  double dist_mean = 0.0;         // mean neighbor distance over the second half
  double cohesion_rel_std = 0.0;  // std/mean of cohesion radius over the last 70%
  std::vector<metrics::MetricsRow> metrics;
};

struct ComparisonReport {
  std::vector<ComparisonCell> cells;  // seed-major, variants in enum order
  std::string to_csv() const;         // per-seed rows followed by aggregate rows
};

/// Runs all three variants from the same sampled initial state for each
/// seed. Cells run in parallel (capped by FLOCK_THREADS); a faulting cell
/// is reported without aborting the others.
ComparisonReport run_comparison(const ScenarioConfig& base, std::span<const std::uint64_t> seeds);

/// Trajectory columns of the unicycle replay: the scenario schema plus
/// heading, v_cmd and omega_cmd.
inline constexpr std::string_view kReplayTrajectoryHeader =
    "t,agent,px,py,vx,vy,heading,v_cmd,omega_cmd";

/// Writes trajectory.csv, metrics.csv and summary.txt for a replay.
/// Throws IoError.
void write_replay_outputs(const unicycle::ReplayConfig& config,
                          const unicycle::ReplayResult& result,
                          const std::filesystem::path& output_dir);

}  // namespace flock
