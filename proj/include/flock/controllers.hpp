#pragma once

#include <cstddef>
#include <span>

#include "flock/state.hpp"
#include "flock/vector.hpp"

namespace flock {

struct ControlCommand {
  Vector raw;        // unsaturated command
  Vector saturated;  // applied command, norm < limit
};

/// Smooth tanh saturation: limit * tanh(|cmd|/limit) * cmd/|cmd|, with the
/// zero vector mapped to itself.
Vector saturate(const Vector& cmd, double limit);

/// Baseline control: sum of psi-weighted relative positions plus sum of
/// relative velocities over the neighborhood. Zero for an empty neighborhood.
Vector velocity_based_control(const SwarmState& state, std::size_t i,
                              std::span<const std::size_t> neighbors,
                              const ModelParams& params);

/// Position-based control evaluated at time `t`. The relative velocity is
/// replaced by the displacement of current relative positions away from
/// the imprinted initial ones, weighted by the alignment gain phi(t).
Vector position_based_control(const SwarmState& state, std::size_t i,
                              std::span<const std::size_t> neighbors,
                              const ModelParams& params, bool thresholded, double t);

/// Same, evaluated at state.time().
Vector position_based_control(const SwarmState& state, std::size_t i,
                              std::span<const std::size_t> neighbors,
                              const ModelParams& params, bool thresholded);

/// Raw and u_max-saturated command for agent i under params.variant, with
/// the alignment gain (position variants) evaluated at time `t`.
ControlCommand control_command(const SwarmState& state, std::size_t i,
                               std::span<const std::size_t> neighbors,
                               const ModelParams& params, double t);

}  // namespace flock
