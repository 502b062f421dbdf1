#pragma once

#include "superlin/types.hpp"

namespace superlin {

// Throws ValidationError unless every sd > 0 and every cell size >= 2.
// The message names the offending field.
void validate(const ExperimentSummary& e);

// The linear contrast z = (m1 + m3) - 2*m2. This association makes the
// contrast vanish exactly (in floating point) whenever the middle mean is
// stored as the average of the outer means, and makes the 1<->3 condition
// swap bit-exact.
double linear_contrast(const ExperimentSummary& e);

// The quadratic form
//   s1^2 + 4 s2^2 + s3^2 - 4 s1 s2 rho1 + 2 s1 s3 rho2 - 4 s2 s3 rho3,
// i.e. the variance of the contrast under correlations rho. May be negative
// for correlation vectors outside any legitimate covariance structure; the
// caller decides how to treat that.
double sigma_z_squared(const std::array<double, 3>& sds,
                       const CorrelationVector& rho) noexcept;

// sqrt of the quadratic form above. Throws InfeasibleCorrelationError when
// the form is negative (never returns a NaN).
double sigma_z(const std::array<double, 3>& sds, const CorrelationVector& rho);

// z, sigma0 = sigma_z(sds, 0), and the dimensionless z_tilde. Balanced cells
// use the literal sqrt(n) * z / sigma0; unbalanced cells use the generalized
// null variance s1^2/n1 + 4 s2^2/n2 + s3^2/n3 (which reduces to the balanced
// formula when n1 = n2 = n3). Validates e.
NormalizedDeviation normalized_deviation(const ExperimentSummary& e);

}  // namespace superlin
