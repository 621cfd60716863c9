#include "mlsa/rates.hpp"

#include <cmath>

#include "mlsa/errors.hpp"

namespace mlsa {

void validate(const RateParameters& rates) {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError(std::string("rates.") + key + " must be a positive finite number");
  };
  positive(rates.alpha, "alpha");
  positive(rates.beta, "beta");
  positive(rates.kappa, "kappa");
  if (!(rates.zeta > 0.5 && rates.zeta <= 1.0))
    throw ValidationError("rates.zeta must lie in (1/2, 1]");
}

}  // namespace mlsa
