#pragma once

#include <cstddef>

namespace flock::gains {

/// Cohesion-separation gain 1 - delta*degree/distance. Negative (repulsive)
/// below the equilibrium spacing delta*degree, positive above it.
/// Throws std::domain_error if distance <= 0.
double cohesion_separation(double distance, double delta, std::size_t degree);

/// Time-dependent alignment gain: degree/t up to t = 1/k, then k*degree when
/// thresholded. Without the threshold it stays degree/t for all t.
/// Throws std::domain_error if t <= 0 or k <= 0.
double alignment(double t, std::size_t degree, double k, bool thresholded);

}  // namespace flock::gains
