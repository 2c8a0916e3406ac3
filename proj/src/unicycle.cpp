#include "flock/unicycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "flock/simulator.hpp"

namespace flock::unicycle {

namespace {

constexpr double kPi = std::numbers::pi;

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SwarmState shadow_state(const std::vector<State>& robots, double time,
                        const std::vector<Vector>& imprint) {
  std::vector<AgentState> agents;
  agents.reserve(robots.size());
  for (const auto& r : robots) agents.push_back({r.position, r.velocity()});
  return SwarmState(time, std::move(agents), imprint);
}

}  // namespace

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

Vector State::velocity() const {
  return Vector(linear_speed * std::cos(heading), linear_speed * std::sin(heading));
}

Command si_to_unicycle(const Vector& desired_velocity, double heading, const Limits& limits,
                       double k_omega) {
  if (desired_velocity.is_zero()) return {};
  const double alpha =
      wrap_angle(std::atan2(desired_velocity.y(), desired_velocity.x()) - heading);
  const double v = std::clamp(desired_velocity.norm() * std::cos(alpha), 0.0, limits.v_lin_max);
  const double omega = std::clamp(k_omega * alpha, -limits.omega_max, limits.omega_max);
  return {v, omega};
}

State step(const State& state, const Command& cmd, double dt) {
  State next;
  next.heading = wrap_angle(state.heading + dt * cmd.omega);
  next.position = state.position +
                  Vector(dt * cmd.v * std::cos(next.heading), dt * cmd.v * std::sin(next.heading));
  next.linear_speed = cmd.v;
  return next;
}

std::vector<State> sample_robots(const ReplayConfig& config) {
  std::mt19937_64 rng(config.seed);
  const double half = 0.5 * config.start_region;
  std::vector<State> robots(config.n);
  for (auto& r : robots) {
    const double x = config.start_region * unit_uniform(rng) - half;
    const double y = config.start_region * unit_uniform(rng) - half;
    r.position = Vector(x, y);
  }
  for (auto& r : robots) r.heading = wrap_angle(2.0 * kPi * unit_uniform(rng) - kPi);
  return robots;
}

ReplayResult replay(const ReplayConfig& config, std::vector<State> robots) {
  const ModelParams& params = config.params;
  params.validate();

  std::vector<Vector> imprint;
  imprint.reserve(robots.size());
  for (const auto& r : robots) imprint.push_back(r.position);

  ReplayResult result;
  const std::size_t total = step_count(params);
  result.frames.reserve(total + 1);
  result.metrics.reserve(total + 1);

  auto record = [&](double time, std::vector<Command> commands) {
    const SwarmState s = shadow_state(robots, time, imprint);
    const NeighborGraph graph = compute_neighbors(s, params.radius);
    metrics::MetricsRow row = metrics::compute(s, graph);
    // Alignment from headings: equal to the velocity-based value whenever
    // every robot is moving, and still defined for robots at rest.
    std::vector<AgentState> facing;
    facing.reserve(robots.size());
    for (const auto& r : robots) {
      facing.push_back({r.position, Vector(std::cos(r.heading), std::sin(r.heading))});
    }
    row.gamma = metrics::alignment(s.advanced(time, std::move(facing)), graph);
    result.metrics.push_back(row);
    for (const auto& r : robots) {
      if (std::abs(r.position.x()) > 0.5 * config.arena_width ||
          std::abs(r.position.y()) > 0.5 * config.arena_height) {
        ++result.wall_violations;
      }
    }
    result.frames.push_back({time, robots, std::move(commands)});
  };

  record(0.0, std::vector<Command>(robots.size()));
  for (std::size_t s = 1; s <= total; ++s) {
    const double time = static_cast<double>(s - 1) * params.dt;
    SwarmState next = shadow_state(robots, time, imprint);
    try {
      next = flock::step(next, params);
    } catch (const SimulationFault& f) {
      throw SimulationFault(f.first(), f.second(), f.time(), s);
    }
    std::vector<Command> commands(robots.size());
    for (std::size_t i = 0; i < robots.size(); ++i) {
      commands[i] = si_to_unicycle(next.agent(i).velocity, robots[i].heading, config.limits,
                                   config.k_omega);
      robots[i] = step(robots[i], commands[i], params.dt);
      result.max_abs_v = std::max(result.max_abs_v, std::abs(commands[i].v));
      result.max_abs_omega = std::max(result.max_abs_omega, std::abs(commands[i].omega));
    }
    record(static_cast<double>(s) * params.dt, std::move(commands));
  }
  return result;
}

ReplayResult replay_experiment(const ReplayConfig& config) {
  return replay(config, sample_robots(config));
}

}  // namespace flock::unicycle
