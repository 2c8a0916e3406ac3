#include "flock/gains.hpp"

#include <algorithm>
#include <stdexcept>

namespace flock::gains {

double cohesion_separation(double distance, double delta, std::size_t degree) {
  if (!(distance > 0.0)) {
    throw std::domain_error("cohesion-separation gain undefined for coincident agents");
  }
  return 1.0 - delta * static_cast<double>(degree) / distance;
}

double alignment(double t, std::size_t degree, double k, bool thresholded) {
  if (!(t > 0.0)) throw std::domain_error("alignment gain undefined for t <= 0");
  if (!(k > 0.0)) throw std::domain_error("alignment gain requires k > 0");
  const double m = static_cast<double>(degree);
  // m/t >= k*m exactly when t <= 1/k, so the max is the piecewise gain and
  // cannot dip below the floor through rounding of 1/k.
  if (thresholded) return std::max(m / t, k * m);
  return m / t;
}

}  // namespace flock::gains
