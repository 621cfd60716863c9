#pragma once

#include <cstdint>

namespace mlsa {

struct Interval {
  double lo;
  double hi;

  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
};

// Nested compact sets K_k = [-(r0 + growth*k), r0 + growth*k].
class ReprojectionFamily {
 public:
  ReprojectionFamily(double r0, double growth);

  double r0() const { return r0_; }
  double growth() const { return growth_; }

  Interval set(std::uint64_t k) const;

  // Smallest k with theta in set(k).
  std::uint64_t first_containing(double theta) const;

 private:
  double r0_;
  double growth_;
};

Interval reprojection_set(const ReprojectionFamily& family, std::uint64_t k);

}  // namespace mlsa
