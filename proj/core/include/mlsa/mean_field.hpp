#pragma once

#include "mlsa/finite_model.hpp"

namespace mlsa::oracle {

// h_l(theta) = sum_x pi_{theta,l}(x) (phi_l(u_x) - theta).
double field_h(const model::FiniteLevelModel& model, Level level, double theta);

// dh_l/dtheta = Var_{pi_{theta,l}}(phi_l) - 1 (exponential-family identity).
double field_derivative(const model::FiniteLevelModel& model, Level level, double theta);

// Unique root of h_l by bisection on [-2, 2], |h_l(root)| < 1e-12.
// Throws NumericalError if h_l does not change sign on the bracket.
double root_theta_star(const model::FiniteLevelModel& model, Level level);

}  // namespace mlsa::oracle
