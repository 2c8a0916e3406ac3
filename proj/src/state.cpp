#include "flock/state.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace flock {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::VelocityBased:
      return "v-based";
    case Variant::PositionThreshold:
      return "p-thr";
    case Variant::PositionNoThreshold:
      return "p-nothr";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "v-based") return Variant::VelocityBased;
  if (name == "p-thr") return Variant::PositionThreshold;
  if (name == "p-nothr") return Variant::PositionNoThreshold;
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "' (expected v-based, p-thr or p-nothr)");
}

void ModelParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(std::isfinite(delta) && delta >= 0.0, "delta: must be >= 0");
  require(std::isfinite(k) && k > 0.0, "k: must be > 0");
  require(std::isfinite(radius) && radius > 0.0, "radius: must be > 0");
  require(std::isfinite(v_max) && v_max > 0.0, "vmax: must be > 0");
  require(std::isfinite(u_max) && u_max > 0.0, "umax: must be > 0");
  require(std::isfinite(dt) && dt > 0.0, "dt: must be > 0");
  require(std::isfinite(t_end) && t_end >= dt, "t_end: must be >= dt");
}

SwarmState::SwarmState(std::vector<AgentState> agents, double time)
    : time_(time), agents_(std::move(agents)) {
  std::vector<Vector> imprint;
  imprint.reserve(agents_.size());
  for (const auto& a : agents_) imprint.push_back(a.position);
  imprint_ = std::make_shared<const std::vector<Vector>>(std::move(imprint));
  validate();
}

SwarmState::SwarmState(double time, std::vector<AgentState> agents,
                       std::vector<Vector> initial_positions)
    : time_(time),
      agents_(std::move(agents)),
      imprint_(std::make_shared<const std::vector<Vector>>(
          std::move(initial_positions))) {
  validate();
}

SwarmState::SwarmState(double time, std::vector<AgentState> agents,
                       std::shared_ptr<const std::vector<Vector>> imprint)
    : time_(time), agents_(std::move(agents)), imprint_(std::move(imprint)) {
  validate();
}

SwarmState SwarmState::advanced(double time, std::vector<AgentState> agents) const {
  return SwarmState(time, std::move(agents), imprint_);
}

void SwarmState::validate() const {
  if (agents_.size() < 2) throw std::invalid_argument("swarm needs at least 2 agents");
  if (imprint_->size() != agents_.size()) {
    throw std::invalid_argument("initial positions must match agent count");
  }
  if (!std::isfinite(time_) || time_ < 0.0) {
    throw std::invalid_argument("swarm time must be finite and >= 0");
  }
  const int d = agents_.front().position.dim();
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i].position.dim() != d || agents_[i].velocity.dim() != d ||
        (*imprint_)[i].dim() != d) {
      throw std::invalid_argument("mixed vector dimensions in swarm state");
    }
  }
}

}  // namespace flock
