#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "arcd/ar_core.hpp"
#include "arcd/grid.hpp"
#include "arcd/parallel.hpp"

namespace arcd {

/// Q = n (phi_hat - phi0)' omega^{-1} (phi_hat - phi0); chi2_p under the null.
double wald_statistic(const Eigen::VectorXd& phi0, const Eigen::VectorXd& phi_hat, const CovMatrix& omega,
                      std::size_t n);

struct WaldBootstrap {
  std::vector<double> q_sorted;  ///< ascending
  std::size_t redraws = 0;       ///< replicates redrawn after a singular refit
};

/// Residual bootstrap of Q under phi = phi_hat_obs: recentred residuals are
/// resampled to length n, a series is regenerated from zero pre-sample
/// values and refit, and Q_k = n (phi_hat_obs - phi_k)' omega(phi_k)^{-1} (...).
/// Replicate k draws from stream k of `seed`.
WaldBootstrap bootstrap_wald(const SeriesSample& series, const FitResult& fit, std::size_t replicates,
                             std::uint64_t seed, Exec exec = Exec::parallel);

std::vector<double> bootstrap_wald_distribution(const SeriesSample& series, std::size_t p, std::size_t replicates,
                                                std::uint64_t seed, Exec exec = Exec::parallel);

/// Default grid: phi_hat +- se_multiple standard errors per axis, clipped to
/// [-2, 2] x [-1, 1].
ParamGrid2D default_window(const FitResult& fit, std::size_t m = 100, double se_multiple = 5.0);

/// Confidence curve over the grid: chi2_2 CDF of Q_obs (wald_asymptotic) or
/// the fraction of bootstrap Q_k below Q_obs (wald_bootstrap). Nodes outside
/// the stationarity triangle carry 1.
ConfidenceSurface confidence_curve(const FitResult& fit, const ParamGrid2D& grid, Method method,
                                   std::span<const double> bootstrap_q_sorted = {}, Exec exec = Exec::parallel);

ConfidenceSurface confidence_curve(const SeriesSample& series, const ParamGrid2D& grid, Method method,
                                   std::size_t bootstrap_replicates, std::uint64_t seed, Exec exec = Exec::parallel);

/// In-region nodes whose curve value is <= level.
RegionResult region_from_curve(const ConfidenceSurface& surface, double level);

}  // namespace arcd
