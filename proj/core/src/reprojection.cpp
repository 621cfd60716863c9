#include "mlsa/reprojection.hpp"

#include <cmath>

#include "mlsa/errors.hpp"

namespace mlsa {

ReprojectionFamily::ReprojectionFamily(double r0, double growth) : r0_(r0), growth_(growth) {
  if (!(r0 > 0.0) || !std::isfinite(r0))
    throw ValidationError("reprojection.r0 must be a positive finite number");
  if (!(growth > 0.0) || !std::isfinite(growth))
    throw ValidationError("reprojection.growth must be a positive finite number");
}

Interval ReprojectionFamily::set(std::uint64_t k) const {
  const double radius = r0_ + growth_ * static_cast<double>(k);
  return {-radius, radius};
}

std::uint64_t ReprojectionFamily::first_containing(double theta) const {
  if (!std::isfinite(theta)) throw ValidationError("non-finite theta is in no reprojection set");
  const double excess = std::abs(theta) - r0_;
  if (excess <= 0.0) return 0;
  auto k = static_cast<std::uint64_t>(std::ceil(excess / growth_));
  // Guard against rounding in the division.
  while (k > 0 && set(k - 1).contains(theta)) --k;
  while (!set(k).contains(theta)) ++k;
  return k;
}

Interval reprojection_set(const ReprojectionFamily& family, std::uint64_t k) { return family.set(k); }

}  // namespace mlsa
