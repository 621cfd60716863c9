#pragma once

#include <cmath>
#include <compare>
#include <string>

#include "mlsa/errors.hpp"

namespace mlsa {

// Index of the solver-accuracy hierarchy. Level 0 is the coarsest; the
// limit level stands for the exact (bias-free) model and has delta 0.
class Level {
 public:
  constexpr explicit Level(unsigned index) : index_(index) {}

  static constexpr Level limit() {
    Level l(0);
    l.limit_ = true;
    return l;
  }

  constexpr bool is_limit() const { return limit_; }

  unsigned index() const {
    if (limit_) throw ValidationError("the limit level has no finite index");
    return index_;
  }

  // 2^{-l}, exact in binary floating point; 0 for the limit level.
  double delta() const { return limit_ ? 0.0 : std::ldexp(1.0, -static_cast<int>(index_)); }

  Level coarser() const {
    if (limit_ || index_ == 0) throw ValidationError("level has no coarser neighbour");
    return Level(index_ - 1);
  }

  std::string to_string() const { return limit_ ? std::string("inf") : std::to_string(index_); }

  friend constexpr bool operator==(const Level& a, const Level& b) {
    return a.limit_ == b.limit_ && (a.limit_ || a.index_ == b.index_);
  }

 private:
  unsigned index_ = 0;
  bool limit_ = false;
};

}  // namespace mlsa
