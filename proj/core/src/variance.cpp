#include "mlsa/variance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mlsa/errors.hpp"

namespace mlsa::oracle {

VarianceReport variance_from_analysis(const model::FiniteLevelModel& model,
                                      const LevelPairAnalysis& a) {
  const Eigen::VectorXd& H = a.H_hat_l.g_hat;
  const Eigen::VectorXd& KH = a.H_hat_l.Kg_hat;
  const Eigen::VectorXd& Hb = a.H_hat_lm1.g_hat;
  const Eigen::VectorXd& KHb = a.H_hat_lm1.Kg_hat;
  const Eigen::VectorXd& pc = a.coupled_stationary;
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(H.size());

  VarianceReport r;
  r.level = a.level.index();
  r.theta_star_l = a.theta_star_l;
  r.theta_star_lm1 = a.theta_star_lm1;
  r.dh_l = a.dh_l;
  r.dh_lm1 = a.dh_lm1;
  r.coupled_stationary = pc;

  // All three brackets are integrated against the coupled law.
  r.fine_term = coupled_expectation(pc, H.cwiseProduct(H) - KH.cwiseProduct(KH), one);
  r.coarse_term = coupled_expectation(pc, one, Hb.cwiseProduct(Hb) - KHb.cwiseProduct(KHb));
  r.cross_term = coupled_expectation(pc, H, Hb) - coupled_expectation(pc, KH, KHb);
  r.mean_squared_distance = coupled_mean_squared_distance(model, pc);

  const double sum_dh = a.dh_l + a.dh_lm1;
  const double fine = -r.fine_term / (2.0 * a.dh_l);
  const double coarse = -r.coarse_term / (2.0 * a.dh_lm1);
  const double cross = r.cross_term / sum_dh;

  r.t1 = fine + cross;
  r.t2 = coarse + cross;
  r.sigma = fine + coarse + 2.0 * cross;
  r.t3 = (1.0 / sum_dh - 1.0 / (2.0 * a.dh_l)) * r.fine_term;
  r.t4 = (r.cross_term - r.fine_term) / sum_dh;

  const double scale = std::max({1.0, std::abs(fine), std::abs(coarse)});
  if (r.sigma < -1e-10 * scale) {
    std::ostringstream os;
    os << "asymptotic_variance_exact: negative variance " << r.sigma << " at level " << r.level;
    throw NumericalError(os.str());
  }
  return r;
}

VarianceReport asymptotic_variance_exact(const model::FiniteLevelModel& model, Level level,
                                         std::optional<model::Coupling> coupling) {
  return variance_from_analysis(model, analyze_level_pair(model, level, coupling));
}

}  // namespace mlsa::oracle
