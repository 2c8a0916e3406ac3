#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "flock/state.hpp"

namespace flock {

/// Symmetric, irreflexive neighbor sets N_i = { j != i : |p_j - p_i| <= r }.
class NeighborGraph {
 public:
  explicit NeighborGraph(std::vector<std::vector<std::size_t>> adjacency)
      : adjacency_(std::move(adjacency)) {}

  std::size_t size() const { return adjacency_.size(); }
  std::span<const std::size_t> neighbors(std::size_t i) const { return adjacency_.at(i); }
  std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Two agents came closer than kCoincidenceTolerance; the run cannot continue.
class SimulationFault : public std::runtime_error {
 public:
  SimulationFault(std::size_t first, std::size_t second, double time,
                  std::optional<std::size_t> step = std::nullopt);

  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }
  double time() const { return time_; }
  std::optional<std::size_t> step() const { return step_; }

 private:
  std::size_t first_;
  std::size_t second_;
  double time_;
  std::optional<std::size_t> step_;
};

inline constexpr double kCoincidenceTolerance = 1e-9;

struct Trajectory {
  std::vector<SwarmState> snapshots;
};

/// Called with (step index, state) for the initial state and after every step.
using StepObserver = std::function<void(std::size_t, const SwarmState&)>;

NeighborGraph compute_neighbors(const SwarmState& state, double radius);

/// One synchronous semi-implicit Euler step. All controls are computed from
/// the pre-step snapshot; position-based gains are evaluated at time + dt.
/// Throws SimulationFault if any pair is closer than kCoincidenceTolerance.
SwarmState step(const SwarmState& state, const ModelParams& params);

/// Number of steps `run` takes to reach params.t_end from t = 0.
std::size_t step_count(const ModelParams& params);

/// Steps until t_end, keeping every `decimation`-th snapshot plus the first
/// and last. A SimulationFault is rethrown with the failing step index.
Trajectory run(const SwarmState& initial, const ModelParams& params,
               std::size_t decimation = 1, const StepObserver& observer = {});

/// Seeded initial condition: positions uniform in [0, box]^dim, velocity
/// directions uniform on the unit circle/sphere, speeds uniform in
/// [0, v_init_max]. Draws come from mt19937_64, positions first, then
/// velocities, agent by agent.
SwarmState sample_initial(std::size_t n, double box, double v_init_max,
                          std::uint64_t seed, int dim = 2);

}  // namespace flock
