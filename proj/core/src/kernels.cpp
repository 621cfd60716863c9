#include "mlsa/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "mlsa/errors.hpp"

namespace mlsa::model {

double rwm_acceptance(std::span<const double> stat, double theta, std::size_t x, int direction) {
  if (direction < 0 && x == 0) return 0.0;
  if (direction > 0 && x + 1 >= stat.size()) return 0.0;
  const std::size_t y = direction > 0 ? x + 1 : x - 1;
  const double log_ratio = theta * (stat[y] - stat[x]);
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void check_state(const FiniteLevelModel& model, std::size_t x) {
  if (x >= model.size()) throw ValidationError("state index out of range");
}

Level coarse_of(Level level) {
  if (level.is_limit() || level.index() < 1)
    throw ValidationError("coupled kernels need a fine level l >= 1");
  return level.coarser();
}

}  // namespace

KernelMatrix kernel_matrix(const FiniteLevelModel& model, Level level, double theta) {
  const Eigen::VectorXd stat = model.statistic(level);
  const auto s = as_span(stat);
  const auto m = static_cast<Eigen::Index>(model.size());
  KernelMatrix K = KernelMatrix::Zero(m, m);
  for (Eigen::Index x = 0; x < m; ++x) {
    for (int d : {-1, 1}) {
      const double a = rwm_acceptance(s, theta, static_cast<std::size_t>(x), d);
      if (a > 0.0) K(x, x + d) += 0.5 * a;
      K(x, x) += 0.5 * (1.0 - a);
    }
  }
  return K;
}

CoupledKernelMatrix coupled_kernel_matrix(const FiniteLevelModel& model, Level level, double theta,
                                          double theta_bar, std::optional<Coupling> coupling) {
  const Level coarse = coarse_of(level);
  const Coupling mode = coupling.value_or(model.coupling());
  const std::size_t m = model.size();
  const Eigen::VectorXd fine_stat = model.statistic(level);
  const Eigen::VectorXd coarse_stat = model.statistic(coarse);
  const auto fs = as_span(fine_stat);
  const auto cs = as_span(coarse_stat);

  const auto n = static_cast<Eigen::Index>(m * m);
  CoupledKernelMatrix K(n, n);
  K.reserve(Eigen::VectorXi::Constant(n, mode == Coupling::crn ? 8 : 9));

  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      row.clear();
      auto add = [&](std::size_t xx, std::size_t yy, double p) {
        if (p > 0.0) row.emplace_back(pair_index(m, xx, yy), p);
      };
      if (mode == Coupling::crn) {
        for (int d : {-1, 1}) {
          const double a = rwm_acceptance(fs, theta, x, d);
          const double b = rwm_acceptance(cs, theta_bar, y, d);
          const std::size_t xm = a > 0.0 ? (d > 0 ? x + 1 : x - 1) : x;
          const std::size_t ym = b > 0.0 ? (d > 0 ? y + 1 : y - 1) : y;
          // The shared uniform splits [0, 1) at a and b.
          add(xm, ym, 0.5 * std::min(a, b));
          add(xm, y, 0.5 * std::max(0.0, a - b));
          add(x, ym, 0.5 * std::max(0.0, b - a));
          add(x, y, 0.5 * (1.0 - std::max(a, b)));
        }
      } else {
        std::array<std::pair<std::size_t, double>, 3> fine{};
        std::array<std::pair<std::size_t, double>, 3> crse{};
        std::size_t nf = 0;
        std::size_t nc = 0;
        double stay_f = 0.0;
        double stay_c = 0.0;
        for (int d : {-1, 1}) {
          const double a = rwm_acceptance(fs, theta, x, d);
          const double b = rwm_acceptance(cs, theta_bar, y, d);
          if (a > 0.0) fine[nf++] = {d > 0 ? x + 1 : x - 1, 0.5 * a};
          if (b > 0.0) crse[nc++] = {d > 0 ? y + 1 : y - 1, 0.5 * b};
          stay_f += 0.5 * (1.0 - a);
          stay_c += 0.5 * (1.0 - b);
        }
        fine[nf++] = {x, stay_f};
        crse[nc++] = {y, stay_c};
        for (std::size_t i = 0; i < nf; ++i)
          for (std::size_t j = 0; j < nc; ++j)
            add(fine[i].first, crse[j].first, fine[i].second * crse[j].second);
      }
      std::sort(row.begin(), row.end());
      const auto r = static_cast<Eigen::Index>(pair_index(m, x, y));
      for (std::size_t i = 0; i < row.size(); ++i) {
        double p = row[i].second;
        while (i + 1 < row.size() && row[i + 1].first == row[i].first) p += row[++i].second;
        K.insert(r, static_cast<Eigen::Index>(row[i].first)) = p;
      }
    }
  }
  K.makeCompressed();
  return K;
}

std::size_t sample_step(const FiniteLevelModel& model, Level level, double theta, std::size_t x,
                        Rng& rng) {
  check_state(model, x);
  const Eigen::VectorXd stat = model.statistic(level);
  const int d = rng.direction();
  const double u = rng.uniform();
  return detail::rwm_move(as_span(stat), theta, x, d, u);
}

std::pair<std::size_t, std::size_t> coupled_sample_step(const FiniteLevelModel& model, Level level,
                                                        double theta, double theta_bar,
                                                        std::size_t x, std::size_t x_bar, Rng& rng,
                                                        std::optional<Coupling> coupling) {
  check_state(model, x);
  check_state(model, x_bar);
  const Level coarse = coarse_of(level);
  const Eigen::VectorXd fs = model.statistic(level);
  const Eigen::VectorXd cs = model.statistic(coarse);
  if (coupling.value_or(model.coupling()) == Coupling::crn) {
    const int d = rng.direction();
    const double u = rng.uniform();
    return {detail::rwm_move(as_span(fs), theta, x, d, u),
            detail::rwm_move(as_span(cs), theta_bar, x_bar, d, u)};
  }
  const int d = rng.direction();
  const double u = rng.uniform();
  const int d_bar = rng.direction();
  const double u_bar = rng.uniform();
  return {detail::rwm_move(as_span(fs), theta, x, d, u),
          detail::rwm_move(as_span(cs), theta_bar, x_bar, d_bar, u_bar)};
}

}  // namespace mlsa::model
