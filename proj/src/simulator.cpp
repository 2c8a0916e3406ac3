#include "flock/simulator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "flock/controllers.hpp"

namespace flock {

namespace {

std::string fault_message(std::size_t a, std::size_t b, double t,
                          std::optional<std::size_t> step) {
  std::string msg = "agents " + std::to_string(a) + " and " + std::to_string(b) +
                    " coincide at t=" + std::to_string(t);
  if (step) msg += " (step " + std::to_string(*step) + ")";
  return msg;
}

NeighborGraph build_graph(const SwarmState& state, double radius, bool fail_on_coincidence) {
  const std::size_t n = state.size();
  const auto agents = state.agents();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(agents[i].position, agents[j].position);
      if (fail_on_coincidence && d < kCoincidenceTolerance) {
        throw SimulationFault(i, j, state.time());
      }
      if (d <= radius) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  return NeighborGraph(std::move(adj));
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

SimulationFault::SimulationFault(std::size_t first, std::size_t second, double time,
                                 std::optional<std::size_t> step)
    : std::runtime_error(fault_message(first, second, time, step)),
      first_(first),
      second_(second),
      time_(time),
      step_(step) {}

NeighborGraph compute_neighbors(const SwarmState& state, double radius) {
  return build_graph(state, radius, false);
}

SwarmState step(const SwarmState& state, const ModelParams& params) {
  const NeighborGraph graph = build_graph(state, params.radius, true);
  const double dt = params.dt;
  const double t_control = state.time() + dt;

  std::vector<AgentState> next;
  next.reserve(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const ControlCommand u = control_command(state, i, graph.neighbors(i), params, t_control);
    const AgentState& a = state.agent(i);
    const Vector v = saturate(a.velocity + dt * u.saturated, params.v_max);
    next.push_back({a.position + dt * v, v});
  }
  return state.advanced(state.time() + dt, std::move(next));
}

std::size_t step_count(const ModelParams& params) {
  const double steps = std::ceil(params.t_end / params.dt - 1e-9);
  return steps < 1.0 ? 1 : static_cast<std::size_t>(steps);
}

Trajectory run(const SwarmState& initial, const ModelParams& params, std::size_t decimation,
               const StepObserver& observer) {
  params.validate();
  if (decimation == 0) decimation = 1;
  const std::size_t total = step_count(params);

  Trajectory traj;
  traj.snapshots.reserve(total / decimation + 2);
  traj.snapshots.push_back(initial);
  if (observer) observer(0, initial);

  SwarmState current = initial;
  for (std::size_t s = 1; s <= total; ++s) {
    try {
      current = step(current, params);
    } catch (const SimulationFault& f) {
      throw SimulationFault(f.first(), f.second(), f.time(), s);
    }
    if (observer) observer(s, current);
    if (s % decimation == 0 || s == total) traj.snapshots.push_back(current);
  }
  return traj;
}

SwarmState sample_initial(std::size_t n, double box, double v_init_max, std::uint64_t seed,
                          int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  std::mt19937_64 rng(seed);

  std::vector<Vector> positions;
  positions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = box * unit_uniform(rng);
    const double y = box * unit_uniform(rng);
    positions.push_back(dim == 2 ? Vector(x, y) : Vector(x, y, box * unit_uniform(rng)));
  }

  std::vector<AgentState> agents;
  agents.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector dir;
    if (dim == 2) {
      const double a = 2.0 * std::numbers::pi * unit_uniform(rng);
      dir = Vector(std::cos(a), std::sin(a));
    } else {
      const double z = 2.0 * unit_uniform(rng) - 1.0;
      const double a = 2.0 * std::numbers::pi * unit_uniform(rng);
      const double rho = std::sqrt(1.0 - z * z);
      dir = Vector(rho * std::cos(a), rho * std::sin(a), z);
    }
    const double speed = v_init_max * unit_uniform(rng);
    agents.push_back({positions[i], speed * dir});
  }
  return SwarmState(std::move(agents));
}

}  // namespace flock
