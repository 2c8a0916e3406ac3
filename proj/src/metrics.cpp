#include "flock/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flock::metrics {

std::optional<double> alignment(const SwarmState& state, const NeighborGraph& graph) {
  const auto agents = state.agents();
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto nbrs = graph.neighbors(i);
    const double si = agents[i].velocity.norm();
    if (nbrs.empty() || si == 0.0) continue;
    double inner = 0.0;
    for (std::size_t j : nbrs) {
      const double sj = agents[j].velocity.norm();
      if (sj == 0.0) continue;
      const double c = agents[i].velocity.dot(agents[j].velocity) / (si * sj);
      inner += std::clamp(c, -1.0, 1.0);
    }
    total += inner / static_cast<double>(nbrs.size());
    ++counted;
  }
  if (counted == 0) return std::nullopt;
  return total / static_cast<double>(counted);
}

std::optional<DistanceStats> neighbor_distance_stats(const SwarmState& state,
                                                     const NeighborGraph& graph) {
  DistanceStats s{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    for (std::size_t j : graph.neighbors(i)) {
      if (j <= i) continue;
      const double d = distance(state.agent(i).position, state.agent(j).position);
      s.min = std::min(s.min, d);
      s.max = std::max(s.max, d);
      s.mean += d;
      ++pairs;
    }
  }
  if (pairs == 0) return std::nullopt;
  s.mean /= static_cast<double>(pairs);
  // keep min <= mean <= max under rounding of the running sum
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

double average_speed(const SwarmState& state) {
  double sum = 0.0;
  for (const auto& a : state.agents()) sum += a.velocity.norm();
  return sum / static_cast<double>(state.size());
}

double cohesion_radius(const SwarmState& state) {
  Vector centroid = Vector::zero(state.dim());
  for (const auto& a : state.agents()) centroid += a.position;
  centroid *= 1.0 / static_cast<double>(state.size());
  double r = 0.0;
  for (const auto& a : state.agents()) r = std::max(r, distance(a.position, centroid));
  return r;
}

double pairwise_distance_variance(const SwarmState& state) {
  const auto agents = state.agents();
  const std::size_t n = state.size();
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d.push_back(distance(agents[i].position, agents[j].position));
  }
  double mean = 0.0;
  for (double x : d) mean += x;
  mean /= static_cast<double>(d.size());
  double var = 0.0;
  for (double x : d) var += (x - mean) * (x - mean);
  return var / static_cast<double>(d.size());
}

MetricsRow compute(const SwarmState& state, const NeighborGraph& graph) {
  MetricsRow row;
  row.time = state.time();
  row.gamma = alignment(state, graph);
  row.neighbor_distance = neighbor_distance_stats(state, graph);
  row.speed_mean = average_speed(state);
  row.cohesion_radius = cohesion_radius(state);
  row.pairwise_dist_variance = pairwise_distance_variance(state);
  return row;
}

MetricsRow compute(const SwarmState& state, double radius) {
  return compute(state, compute_neighbors(state, radius));
}

}  // namespace flock::metrics
