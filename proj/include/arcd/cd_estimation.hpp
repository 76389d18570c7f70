#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "arcd/ar_core.hpp"
#include "arcd/grid.hpp"
#include "arcd/parallel.hpp"

namespace arcd {

/// Gaussian confidence density
/// n/(2 pi |omega|^{1/2}) exp{-(n/2)(phi_obs - phi)' omega^{-1} (phi_obs - phi)}.
double cd_asymptotic_density(const Eigen::Vector2d& phi, const Eigen::Vector2d& phi_hat_obs, const CovMatrix& omega,
                             std::size_t n);
/// Logarithm of the same density; finite far into the tails.
double log_cd_asymptotic_density(const Eigen::Vector2d& phi, const Eigen::Vector2d& phi_hat_obs,
                                 const CovMatrix& omega, std::size_t n);

/// Unnormalized asymptotic density on the grid. With `restrict_to_triangle`
/// nodes outside the stationarity triangle are zero.
ConfidenceSurface asymptotic_density_surface(const FitResult& fit, const ParamGrid2D& grid,
                                             bool restrict_to_triangle = true, Exec exec = Exec::parallel);

/// Monte Carlo orthant probabilities C(phi) = P_phi(phi_hat_1 >= obs_1, phi_hat_2 >= obs_2)
/// on the in-region nodes of a grid; NaN elsewhere.
struct CdfGridEstimate {
  ParamGrid2D grid;
  std::vector<double> cdf;
  std::size_t n_mc = 0;
  Eigen::Vector2d phi_hat_obs = Eigen::Vector2d::Zero();
};

/// For every in-region node, simulates n_mc series of length n with the
/// node as true coefficients and counts refits exceeding phi_hat_obs in both
/// coordinates. Node k draws from stream k of `seed`.
CdfGridEstimate estimate_cdf_grid(const ParamGrid2D& grid, const Eigen::Vector2d& phi_hat_obs, std::size_t n,
                                  double sigma2, std::size_t n_mc, std::uint64_t seed, Exec exec = Exec::parallel);

/// Truncation bound for the probit regression at sample size n and node phi.
using DeltaRule = std::function<double(std::size_t n, double phi1, double phi2)>;

/// min{0.1, exp(6.04 - 2.64 log n + 4.39 phi1 + 9.92 phi2)}, floored at 1e-6.
double default_delta(std::size_t n, double phi1, double phi2);

/// Phi^{-1}(C) = c0 + c1 phi1 + c2 phi2 + c11 phi1^2 + c22 phi2^2 + c12 phi1 phi2.
struct ProbitQuadFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c11 = 0.0, c22 = 0.0, c12 = 0.0;
  std::size_t n_used = 0;
  double delta = 0.0;  ///< smallest truncation bound among the nodes used

  double z(double phi1, double phi2) const noexcept {
    return c0 + c1 * phi1 + c2 * phi2 + c11 * phi1 * phi1 + c22 * phi2 * phi2 + c12 * phi1 * phi2;
  }
};

/// OLS of the probit of the CDF on a quadratic in (phi1, phi2), using only
/// nodes with delta < C < 1 - delta. Throws InvalidParameter with the node
/// count when fewer than 6 nodes survive.
ProbitQuadFit fit_probit_quadratic(const CdfGridEstimate& estimate, std::size_t n,
                                   const DeltaRule& delta_rule = default_delta);

/// Mixed derivative d^2/dphi1 dphi2 of Phi(z(phi)); may be negative.
double cd_bootstrap_density(const ProbitQuadFit& fit, const Eigen::Vector2d& phi);

/// Raw mixed-derivative surface on the grid (zero outside the triangle).
ConfidenceSurface bootstrap_density_surface(const ProbitQuadFit& fit, const ParamGrid2D& grid);

}  // namespace arcd
