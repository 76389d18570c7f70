#include "arcd/implied_prior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "arcd/cd_estimation.hpp"
#include "arcd/errors.hpp"

namespace arcd {

double implied_prior_main_term(double sigma2) {
  return 0.5 * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
}

double b_statistic(const Eigen::Vector2d& phi, const FitResult& fit, const CovMatrix& omega, double sigma2) {
  const double n = static_cast<double>(fit.n);
  const Eigen::Vector2d d = Eigen::Vector2d(fit.phi_hat[0], fit.phi_hat[1]) - phi;
  const Eigen::Matrix2d om = omega.omega;
  const double q = d.dot(om.inverse() * d);
  return n * sigma2 * q - residual_sum_of_squares(Eigen::VectorXd(phi), fit.stats());
}

double log_implied_prior(const Eigen::Vector2d& phi, const FitResult& fit, const CovMatrix& omega, double sigma2) {
  if (fit.order() != 2) throw InvalidParameter("implied prior is implemented for AR(2)");
  const Eigen::Vector2d obs(fit.phi_hat[0], fit.phi_hat[1]);
  const double log_c = std::max(log_cd_asymptotic_density(phi, obs, omega, fit.n), std::log(kDensityFloor));
  const double log_l = log_likelihood(ARParams{Eigen::VectorXd(phi), sigma2}, fit.stats());
  return (log_c - log_l) / static_cast<double>(fit.n);
}

double implied_prior_residual(const Eigen::Vector2d& phi, const FitResult& fit, const CovMatrix& omega, double sigma2) {
  const double n = static_cast<double>(fit.n);
  const double p = static_cast<double>(fit.order());
  return log_implied_prior(phi, fit, omega, sigma2) - implied_prior_main_term(sigma2) - 0.5 * p * std::log(n) / n;
}

double rest_term_h_p1(double phi0, double phi) {
  if (!(std::abs(phi0) < 1.0)) throw DomainError("rest term needs |phi0| < 1");
  return -phi0 * (1.0 - 2.0 * phi0 * phi + phi * phi) / std::pow(1.0 - phi0 * phi0, 1.5);
}

ConfidenceSurface implied_prior_residual_surface(const FitResult& fit, const ParamGrid2D& grid, double sigma2,
                                                 Exec exec) {
  const CovMatrix omega = omega_p2(Eigen::Vector2d(fit.phi_hat[0], fit.phi_hat[1]));
  ConfidenceSurface s{grid, std::vector<double>(grid.size(), std::nan("")), SurfaceKind::log_implied_prior,
                      Method::cd_asymptotic};
  for_each_index(grid.size(), exec, [&](std::size_t k) {
    if (grid.in_region(k)) s.values[k] = implied_prior_residual(grid.point(k), fit, omega, sigma2);
  });
  return s;
}

}  // namespace arcd
