#include "superlin/feasible.hpp"

#include <cmath>

#include "superlin/contrast.hpp"
#include "superlin/errors.hpp"

namespace superlin {

bool is_positive_definite(const CorrelationVector& rho) noexcept {
  const bool box = std::fabs(rho.rho1) < 1.0 && std::fabs(rho.rho2) < 1.0 &&
                   std::fabs(rho.rho3) < 1.0;
  if (!box) return false;
  const double det_term = rho.rho1 * rho.rho1 + rho.rho2 * rho.rho2 +
                          rho.rho3 * rho.rho3 -
                          2.0 * rho.rho1 * rho.rho2 * rho.rho3;
  return det_term < 1.0;
}

FeasibilityVerdict check_feasible(const std::array<double, 3>& sds,
                                  const CorrelationVector& rho) noexcept {
  FeasibilityVerdict v;
  v.in_open_box = std::fabs(rho.rho1) < 1.0 && std::fabs(rho.rho2) < 1.0 &&
                  std::fabs(rho.rho3) < 1.0;
  const double det_term = rho.rho1 * rho.rho1 + rho.rho2 * rho.rho2 +
                          rho.rho3 * rho.rho3 -
                          2.0 * rho.rho1 * rho.rho2 * rho.rho3;
  v.positive_definite = det_term < 1.0;
  const double q = sigma_z_squared(sds, rho);
  const double q0 = sigma_z_squared(sds, CorrelationVector{});
  v.variance_reducing = q >= 0.0 && q <= q0;
  v.feasible = v.in_open_box && v.positive_definite && v.variance_reducing;
  return v;
}

double relative_sd(const std::array<double, 3>& sds,
                   const CorrelationVector& rho) {
  if (!check_feasible(sds, rho).feasible) {
    throw ValidationError(
        "relative_sd requires a feasible correlation vector");
  }
  const double q = sigma_z_squared(sds, rho);
  const double q0 = sigma_z_squared(sds, CorrelationVector{});
  return std::sqrt(q / q0);
}

}  // namespace superlin
