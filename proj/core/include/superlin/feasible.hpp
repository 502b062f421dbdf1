#pragma once

#include "superlin/types.hpp"

namespace superlin {

// Membership breakdown for the feasible correlation set:
//   in_open_box       : every component strictly inside (-1, 1)
//   positive_definite : rho1^2 + rho2^2 + rho3^2 - 2 rho1 rho2 rho3 < 1
//                       (the determinant condition alone)
//   variance_reducing : 0 <= sigma_z^2(sds, rho) <= sigma_z^2(sds, 0)
//   feasible          : conjunction of all three
// All comparisons are exact; only variance_reducing is non-strict.
struct FeasibilityVerdict {
  bool in_open_box = false;
  bool positive_definite = false;
  bool variance_reducing = false;
  bool feasible = false;

  bool operator==(const FeasibilityVerdict&) const = default;
};

// True iff both the open-box and determinant conditions hold strictly, i.e.
// rho is the off-diagonal of a positive-definite correlation matrix.
bool is_positive_definite(const CorrelationVector& rho) noexcept;

// Full verdict for the given sds. Never throws: a negative contrast variance
// simply yields variance_reducing = false.
FeasibilityVerdict check_feasible(const std::array<double, 3>& sds,
                                  const CorrelationVector& rho) noexcept;

// The relative SD a = sigma_z(sds, rho) / sigma_z(sds, 0), in (0, 1] for
// feasible rho. Throws ValidationError when rho is not feasible for sds.
double relative_sd(const std::array<double, 3>& sds,
                   const CorrelationVector& rho);

}  // namespace superlin
