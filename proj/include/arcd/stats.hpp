#pragma once

#include <cmath>
#include <numbers>

namespace arcd {

/// Regularized lower incomplete gamma P(dof/2, x/2).
double chi2_cdf(double x, int dof);
/// Upper-tail critical value: P(X >= q) = alpha for X ~ chi2(dof).
double chi2_critical(double alpha, int dof);

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Inverse standard normal CDF by Wichura's AS 241 rational approximation
/// (about 1e-16 relative accuracy). Returns +-inf at 0 and 1.
double normal_quantile(double p);

}  // namespace arcd
