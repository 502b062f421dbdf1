#include "superlin/contrast.hpp"

#include <cmath>
#include <string>

#include "superlin/errors.hpp"

namespace superlin {

void validate(const ExperimentSummary& e) {
  for (int i = 0; i < 3; ++i) {
    if (!(e.sds[static_cast<std::size_t>(i)] > 0.0) ||
        !std::isfinite(e.sds[static_cast<std::size_t>(i)])) {
      throw ValidationError("experiment '" + e.id + "': sds[" +
                            std::to_string(i + 1) + "] must be > 0");
    }
    if (!std::isfinite(e.means[static_cast<std::size_t>(i)])) {
      throw ValidationError("experiment '" + e.id + "': means[" +
                            std::to_string(i + 1) + "] must be finite");
    }
    if (e.cell_sizes[static_cast<std::size_t>(i)] < 2) {
      throw ValidationError("experiment '" + e.id + "': cell_sizes[" +
                            std::to_string(i + 1) +
                            "] must be >= 2 (a sample SD needs n >= 2)");
    }
  }
}

double linear_contrast(const ExperimentSummary& e) {
  validate(e);
  return (e.means[0] + e.means[2]) - 2.0 * e.means[1];
}

double sigma_z_squared(const std::array<double, 3>& sds,
                       const CorrelationVector& rho) noexcept {
  const double s1 = sds[0], s2 = sds[1], s3 = sds[2];
  const double base = s1 * s1 + 4.0 * s2 * s2 + s3 * s3;
  return base - 4.0 * s1 * s2 * rho.rho1 + 2.0 * s1 * s3 * rho.rho2 -
         4.0 * s2 * s3 * rho.rho3;
}

double sigma_z(const std::array<double, 3>& sds, const CorrelationVector& rho) {
  const double q = sigma_z_squared(sds, rho);
  if (q < 0.0) {
    throw InfeasibleCorrelationError(
        "correlation vector yields a negative contrast variance (" +
        std::to_string(q) + ")");
  }
  return std::sqrt(q);
}

NormalizedDeviation normalized_deviation(const ExperimentSummary& e) {
  validate(e);
  NormalizedDeviation d;
  d.z = (e.means[0] + e.means[2]) - 2.0 * e.means[1];
  d.sigma0 = sigma_z(e.sds, CorrelationVector{});
  if (e.balanced()) {
    const double n = static_cast<double>(e.cell_sizes[0]);
    d.z_tilde = std::sqrt(n) * d.z / d.sigma0;
  } else {
    const double var0 =
        e.sds[0] * e.sds[0] / static_cast<double>(e.cell_sizes[0]) +
        4.0 * e.sds[1] * e.sds[1] / static_cast<double>(e.cell_sizes[1]) +
        e.sds[2] * e.sds[2] / static_cast<double>(e.cell_sizes[2]);
    d.z_tilde = d.z / std::sqrt(var0);
  }
  return d;
}

}  // namespace superlin
