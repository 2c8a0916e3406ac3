#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "flock/metrics.hpp"
#include "flock/state.hpp"
#include "flock/vector.hpp"

namespace flock::unicycle {

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

struct State {
  Vector position;           // planar, m
  double heading = 0.0;      // rad, (-pi, pi]
  double linear_speed = 0.0; // m/s, [0, v_lin_max]

  Vector velocity() const;   // linear_speed * (cos heading, sin heading)
};

struct Limits {
  double v_lin_max = 0.15;
  double omega_max = 0.55;
};

struct Command {
  double v = 0.0;
  double omega = 0.0;
};

/// Maps a desired planar velocity to a forward speed (cosine projection onto
/// the heading, never reversing) and a proportional turn rate, both clamped.
Command si_to_unicycle(const Vector& desired_velocity, double heading, const Limits& limits,
                       double k_omega);

/// Turns first, then drives along the new heading.
State step(const State& state, const Command& cmd, double dt);

struct ReplayConfig {
  std::size_t n = 9;
  double start_region = 1.0;   // side of the square start region, m
  double arena_width = 3.2;    // m, arena centered on the origin
  double arena_height = 2.0;   // m
  ModelParams params{0.12, 0.15, 0.75, 0.15, 0.5, Variant::PositionThreshold, 0.033, 120.0};
  Limits limits{};
  double k_omega = 2.0;
  std::uint64_t seed = 1;
};

/// Per-step record of the replay: robot states plus the commands that
/// produced them (commands are zero in the initial frame).
struct Frame {
  double time = 0.0;
  std::vector<State> robots;
  std::vector<Command> commands;
};

struct ReplayResult {
  std::vector<Frame> frames;
  std::vector<metrics::MetricsRow> metrics;
  std::size_t wall_violations = 0;  // robot-steps spent outside the arena
  double max_abs_v = 0.0;
  double max_abs_omega = 0.0;
};

/// Random positions in the start region (centered on the origin) and
/// uniform headings, robots at rest. Draws come from mt19937_64, positions
/// then headings, robot by robot.
std::vector<State> sample_robots(const ReplayConfig& config);

/// Runs the position-based flocking law on unicycle robots. Each step the
/// law acts on a shadow double integrator whose velocity is the robot's
/// current planar velocity; the integrated shadow velocity is mapped to
/// (v, omega) and the kinematics advance. Metrics use the planar velocities,
/// except gamma, which uses heading directions. Throws SimulationFault on
/// coincidence.
ReplayResult replay(const ReplayConfig& config, std::vector<State> robots);
ReplayResult replay_experiment(const ReplayConfig& config);

}  // namespace flock::unicycle
