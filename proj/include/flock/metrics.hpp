#pragma once

#include <optional>

#include "flock/simulator.hpp"
#include "flock/state.hpp"

namespace flock::metrics {

struct DistanceStats {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

/// One row of the per-timestep metrics series. Optional fields are empty
/// when the metric is undefined for the snapshot.
struct MetricsRow {
  double time = 0.0;
  std::optional<double> gamma;
  std::optional<DistanceStats> neighbor_distance;
  double speed_mean = 0.0;
  double cohesion_radius = 0.0;
  double pairwise_dist_variance = 0.0;
};

/// Mean over agents of the mean neighbor cosine similarity of velocities.
/// Agents with no neighbors or zero speed are left out of the outer mean;
/// zero-speed neighbors contribute a cosine of 0. Empty if no agent qualifies.
std::optional<double> alignment(const SwarmState& state, const NeighborGraph& graph);

/// Min/mean/max over unordered neighbor pairs. Empty if there are none.
std::optional<DistanceStats> neighbor_distance_stats(const SwarmState& state,
                                                     const NeighborGraph& graph);

double average_speed(const SwarmState& state);

/// Largest distance from any agent to the centroid.
double cohesion_radius(const SwarmState& state);

/// Population variance of the distances between all unordered pairs.
double pairwise_distance_variance(const SwarmState& state);

MetricsRow compute(const SwarmState& state, const NeighborGraph& graph);
MetricsRow compute(const SwarmState& state, double radius);

}  // namespace flock::metrics
