#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arcd/rng.hpp"

namespace arcd {

/// Coefficients of a zero-mean AR(p) process and its innovation variance.
struct ARParams {
  Eigen::VectorXd phi;
  double sigma2 = 1.0;

  std::size_t order() const noexcept { return static_cast<std::size_t>(phi.size()); }
  /// Throws InvalidParameter unless p >= 1 and sigma2 > 0.
  void validate() const;
};

/// Observed or simulated series y_1..y_n. Pre-sample values are zero and
/// never stored.
struct SeriesSample {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  std::span<const double> view() const noexcept { return values; }
};

/// Cross-product sums of the regression form with zero pre-sample values:
/// xtx = sum y_{t-} y_{t-}', xty = sum y_{t-} y_t, yty = sum y_t^2, t = 1..n.
struct SufficientStats {
  std::size_t n = 0;
  Eigen::MatrixXd xtx;
  Eigen::VectorXd xty;
  double yty = 0.0;

  std::size_t order() const noexcept { return static_cast<std::size_t>(xty.size()); }
};

struct FitResult {
  Eigen::VectorXd phi_hat;
  double sigma2_hat = 0.0;  ///< ML divisor n
  std::vector<double> residuals;
  Eigen::MatrixXd xtx;
  Eigen::VectorXd xty;
  double yty = 0.0;
  std::size_t n = 0;

  std::size_t order() const noexcept { return static_cast<std::size_t>(phi_hat.size()); }
  SufficientStats stats() const { return {n, xtx, xty, yty}; }
};

/// Asymptotic covariance of sqrt(n)(phi_hat - phi). `warning` is set when
/// the matrix was evaluated on or outside the stationarity boundary.
struct CovMatrix {
  Eigen::MatrixXd omega;
  std::optional<std::string> warning;
};

/// Spectral-radius margin below which the companion matrix counts as causal.
inline constexpr double kCausalTolerance = 1e-8;

SeriesSample simulate(const ARParams& params, std::size_t n, std::uint64_t seed);

/// Runs the AR recursion on given innovations with zero pre-sample values.
SeriesSample simulate_with_innovations(const Eigen::VectorXd& phi, std::span<const double> innovations);

SufficientStats sufficient_stats(std::span<const double> y, std::size_t p);

/// Least squares (= conditional ML) fit. Throws DegenerateDesign when X'X is
/// singular and InvalidParameter when n <= p.
FitResult fit_ar(const SeriesSample& series, std::size_t p);

/// A(phi) summed directly over t = 1..n.
double residual_sum_of_squares(const Eigen::VectorXd& phi, std::span<const double> y);
/// A(phi) = yty - 2 phi'xty + phi'xtx phi.
double residual_sum_of_squares(const Eigen::VectorXd& phi, const SufficientStats& stats);
/// A(phi) = yty - phi'xtx(2 phi_hat - phi), valid only at the least squares solution.
double residual_sum_of_squares_via_mle(const Eigen::VectorXd& phi, const FitResult& fit);

double log_likelihood(const ARParams& params, const SeriesSample& series);
double log_likelihood(const ARParams& params, const SufficientStats& stats);

/// Strict AR(2) stationarity triangle.
bool is_stationary_p2(const Eigen::Vector2d& phi);
inline bool is_stationary_p2(double phi1, double phi2) {
  return phi1 + phi2 < 1.0 && phi2 - phi1 < 1.0 && phi2 > -1.0;
}

Eigen::MatrixXd companion_matrix(const Eigen::VectorXd& phi);

/// Eigenvalues of the companion matrix: closed-form polynomial roots for
/// p <= 3, a general eigen-solver above.
std::vector<std::complex<double>> companion_eigenvalues(const Eigen::VectorXd& phi);
double spectral_radius(const Eigen::VectorXd& phi);

bool is_causal(const Eigen::VectorXd& phi, double tol = kCausalTolerance);

/// Closed-form AR(2) asymptotic covariance.
CovMatrix omega_p2(const Eigen::Vector2d& phi);

/// General-p asymptotic covariance R^{-1}, with
/// R = vec^{-1}{(I - F (x) F)^{-1} vec(e1 e1')} and F the companion matrix.
/// Throws SingularMatrix for non-causal or unit-root coefficients.
CovMatrix omega_general(const Eigen::VectorXd& phi);

/// omega_p2 for p = 2, omega_general otherwise.
CovMatrix omega_hat(const Eigen::VectorXd& phi);

/// Standard errors sqrt(omega_jj / n).
Eigen::VectorXd standard_errors(const CovMatrix& omega, std::size_t n);

}  // namespace arcd
