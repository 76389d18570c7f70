#pragma once

// Allocation-free AR(2) inner loops used by the Monte Carlo kernels.

#include <cmath>
#include <cstddef>
#include <optional>

#include <Eigen/Dense>

namespace arcd::kernels {

/// Running cross-products of the AR(2) regression with zero pre-sample values.
struct Ar2Accumulator {
  double s11 = 0.0, s12 = 0.0, s22 = 0.0;  // sum y_{t-1}^2, y_{t-1}y_{t-2}, y_{t-2}^2
  double r1 = 0.0, r2 = 0.0;               // sum y_{t-1}y_t, y_{t-2}y_t
  double lag1 = 0.0, lag2 = 0.0;

  void push(double y) noexcept {
    s11 += lag1 * lag1;
    s12 += lag1 * lag2;
    s22 += lag2 * lag2;
    r1 += lag1 * y;
    r2 += lag2 * y;
    lag2 = lag1;
    lag1 = y;
  }

  /// Least squares solution, or nullopt if the 2x2 system is degenerate.
  std::optional<Eigen::Vector2d> solve() const noexcept {
    const double det = s11 * s22 - s12 * s12;
    if (!(det > 1e-12 * s11 * s22) || !(s11 > 0.0)) return std::nullopt;
    return Eigen::Vector2d((s22 * r1 - s12 * r2) / det, (s11 * r2 - s12 * r1) / det);
  }
};

/// Generates y_t = phi1 y_{t-1} + phi2 y_{t-2} + e_t for t = 1..n with
/// e_t = draw(), and returns the refit estimate.
template <class Draw>
std::optional<Eigen::Vector2d> simulate_fit_ar2(double phi1, double phi2, std::size_t n, Draw&& draw) {
  Ar2Accumulator acc;
  for (std::size_t t = 0; t < n; ++t) acc.push(phi1 * acc.lag1 + phi2 * acc.lag2 + draw());
  return acc.solve();
}

/// n (a - b)' omega^{-1} (a - b) for 2x2 omega; NaN if omega is singular.
inline double wald_form_2x2(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Matrix2d& omega,
                            double n) noexcept {
  const double det = omega(0, 0) * omega(1, 1) - omega(0, 1) * omega(1, 0);
  if (det == 0.0 || !std::isfinite(det)) return std::nan("");
  const double d1 = a[0] - b[0];
  const double d2 = a[1] - b[1];
  const double q = (omega(1, 1) * d1 * d1 - (omega(0, 1) + omega(1, 0)) * d1 * d2 + omega(0, 0) * d2 * d2) / det;
  return n * q;
}

}  // namespace arcd::kernels
