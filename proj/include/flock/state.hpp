#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flock/vector.hpp"

namespace flock {

struct AgentState {
  Vector position;
  Vector velocity;
};

enum class Variant {
  VelocityBased,        // velocity alignment baseline
  PositionThreshold,    // position-based, alignment gain floored at k|N_i|
  PositionNoThreshold,  // position-based, alignment gain |N_i|/t for all t
};

/// Config-file spelling of a variant: "v-based", "p-thr", "p-nothr".
std::string_view to_string(Variant v);
/// Inverse of to_string; throws std::invalid_argument on an unknown name.
Variant parse_variant(std::string_view name);

/// Swarm-global model parameters. Units: m, s, m/s, m/s^2. A run of exactly
/// one step (t_end == dt) is allowed.
struct ModelParams {
  double delta = 0.0;
  double k = 0.1;
  double radius = 7.5;
  double v_max = 2.5;
  double u_max = 5.0;
  Variant variant = Variant::PositionThreshold;
  double dt = 0.05;
  double t_end = 100.0;

  /// Throws std::invalid_argument naming the first violated field.
  void validate() const;
};

/// Snapshot of the whole swarm. The initial positions (memory imprint) are
/// fixed at construction and shared, read-only, by every later snapshot.
class SwarmState {
 public:
  /// Start-of-run state: the imprint is taken from the agents' positions.
  explicit SwarmState(std::vector<AgentState> agents, double time = 0.0);

  /// State with an explicit imprint; used for mid-run snapshots and tests.
  SwarmState(double time, std::vector<AgentState> agents,
             std::vector<Vector> initial_positions);

  double time() const { return time_; }
  std::size_t size() const { return agents_.size(); }
  int dim() const { return agents_.front().position.dim(); }

  std::span<const AgentState> agents() const { return agents_; }
  const AgentState& agent(std::size_t i) const { return agents_.at(i); }
  std::span<const Vector> initial_positions() const { return *imprint_; }

  /// Successor snapshot sharing this state's imprint.
  SwarmState advanced(double time, std::vector<AgentState> agents) const;

 private:
  SwarmState(double time, std::vector<AgentState> agents,
             std::shared_ptr<const std::vector<Vector>> imprint);
  void validate() const;

  double time_ = 0.0;
  std::vector<AgentState> agents_;
  std::shared_ptr<const std::vector<Vector>> imprint_;
};

}  // namespace flock
