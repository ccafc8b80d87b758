#pragma once

#include <cmath>
#include <functional>

#include "stance/error.hpp"
#include "stance/types.hpp"

namespace stance {

// Central-difference gradient check over a flattened parameter vector.
// Returns the maximum relative error |ga - gn| / max(1e-6, |ga| + |gn|);
// the floor keeps rounding noise on near-zero gradients from dominating.
// The loss function must be deterministic; non-finite values abort the check.
inline double max_relative_error(
    const std::function<double(const VecD&)>& loss, const VecD& point,
    const VecD& analytic, double eps = 1e-5) {
  if (point.size() != analytic.size()) {
    throw std::invalid_argument("gradient size mismatch");
  }
  double worst = 0.0;
  VecD probe = point;
  for (Eigen::Index k = 0; k < point.size(); ++k) {
    probe[k] = point[k] + eps;
    const double up = loss(probe);
    probe[k] = point[k] - eps;
    const double down = loss(probe);
    probe[k] = point[k];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw DataError("non-finite loss in gradient check");
    }
    const double numeric = (up - down) / (2.0 * eps);
    const double ga = analytic[k];
    const double rel =
        std::abs(ga - numeric) / std::max(1e-6, std::abs(ga) + std::abs(numeric));
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace stance
