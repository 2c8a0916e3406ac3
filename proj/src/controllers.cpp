#include "flock/controllers.hpp"

#include <cmath>

#include "flock/gains.hpp"

namespace flock {

Vector saturate(const Vector& cmd, double limit) {
  const double n = cmd.norm();
  if (n == 0.0) return Vector::zero(cmd.dim());
  Vector out = cmd * (limit * std::tanh(n / limit) / n);
  // once tanh rounds to 1 the norm can land an ulp above the limit
  while (out.norm() > limit) out = out * (1.0 - 0x1.0p-52);
  return out;
}

namespace {

Vector cohesion_term(const SwarmState& state, std::size_t i,
                     std::span<const std::size_t> neighbors, double delta) {
  const Vector& pi = state.agent(i).position;
  Vector sum = Vector::zero(state.dim());
  for (std::size_t j : neighbors) {
    const Vector rel = state.agent(j).position - pi;
    sum += gains::cohesion_separation(rel.norm(), delta, neighbors.size()) * rel;
  }
  return sum;
}

}  // namespace

Vector velocity_based_control(const SwarmState& state, std::size_t i,
                              std::span<const std::size_t> neighbors,
                              const ModelParams& params) {
  Vector u = cohesion_term(state, i, neighbors, params.delta);
  const Vector& vi = state.agent(i).velocity;
  for (std::size_t j : neighbors) u += state.agent(j).velocity - vi;
  return u;
}

Vector position_based_control(const SwarmState& state, std::size_t i,
                              std::span<const std::size_t> neighbors,
                              const ModelParams& params, bool thresholded, double t) {
  if (neighbors.empty()) return Vector::zero(state.dim());
  const double phi = gains::alignment(t, neighbors.size(), params.k, thresholded);
  const auto imprint = state.initial_positions();
  const Vector& pi = state.agent(i).position;

  // sum_j (psi_ij + phi)(p_j - p_i) - phi * sum_j (p_j(0) - p_i(0)), grouped
  // so the displacement bracket is exactly zero when nothing has moved.
  Vector u = Vector::zero(state.dim());
  Vector displacement = Vector::zero(state.dim());
  for (std::size_t j : neighbors) {
    const Vector rel = state.agent(j).position - pi;
    const double psi = gains::cohesion_separation(rel.norm(), params.delta, neighbors.size());
    u += psi * rel;
    displacement += rel - (imprint[j] - imprint[i]);
  }
  u += phi * displacement;
  return u;
}

Vector position_based_control(const SwarmState& state, std::size_t i,
                              std::span<const std::size_t> neighbors,
                              const ModelParams& params, bool thresholded) {
  return position_based_control(state, i, neighbors, params, thresholded, state.time());
}

ControlCommand control_command(const SwarmState& state, std::size_t i,
                               std::span<const std::size_t> neighbors,
                               const ModelParams& params, double t) {
  Vector raw;
  switch (params.variant) {
    case Variant::VelocityBased:
      raw = velocity_based_control(state, i, neighbors, params);
      break;
    case Variant::PositionThreshold:
      raw = position_based_control(state, i, neighbors, params, true, t);
      break;
    case Variant::PositionNoThreshold:
      raw = position_based_control(state, i, neighbors, params, false, t);
      break;
  }
  return {raw, saturate(raw, params.u_max)};
}

}  // namespace flock
