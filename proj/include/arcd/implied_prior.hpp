#pragma once

#include "arcd/ar_core.hpp"
#include "arcd/grid.hpp"
#include "arcd/parallel.hpp"

namespace arcd {

/// Floor applied to the confidence density before taking logs.
inline constexpr double kDensityFloor = 1e-323;

/// (log(2 pi sigma2) + 1)/2.
double implied_prior_main_term(double sigma2);

/// B = n sigma2 (phi_hat - phi)' omega^{-1} (phi_hat - phi) - A(phi).
double b_statistic(const Eigen::Vector2d& phi, const FitResult& fit, const CovMatrix& omega, double sigma2);

/// n^{-1}[log c(phi) - log L(phi, sigma2)] with c the asymptotic confidence
/// density at the fit (floored at kDensityFloor), all in log space.
double log_implied_prior(const Eigen::Vector2d& phi, const FitResult& fit, const CovMatrix& omega, double sigma2);

/// log_implied_prior - main term - (p/2) log(n)/n.
double implied_prior_residual(const Eigen::Vector2d& phi, const FitResult& fit, const CovMatrix& omega, double sigma2);

/// Rest-term coefficient for p = 1:
/// h(phi0, phi) = -phi0 (1 - 2 phi0 phi + phi^2)/(1 - phi0^2)^{3/2}.
double rest_term_h_p1(double phi0, double phi);

/// Implied-prior residual on the in-region nodes (NaN elsewhere). Omega is
/// taken at the estimate.
ConfidenceSurface implied_prior_residual_surface(const FitResult& fit, const ParamGrid2D& grid, double sigma2,
                                                 Exec exec = Exec::parallel);

}  // namespace arcd
