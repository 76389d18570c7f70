#include "arcd/ar_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "arcd/errors.hpp"

namespace arcd {

void ARParams::validate() const {
  if (phi.size() < 1) throw InvalidParameter("AR order must be at least 1");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    std::ostringstream msg;
    msg << "innovation variance must be positive, got " << sigma2;
    throw InvalidParameter(msg.str());
  }
}

SeriesSample simulate_with_innovations(const Eigen::VectorXd& phi, std::span<const double> innovations) {
  const auto p = static_cast<std::size_t>(phi.size());
  SeriesSample out;
  out.values.resize(innovations.size());
  for (std::size_t t = 0; t < innovations.size(); ++t) {
    double y = innovations[t];
    for (std::size_t k = 1; k <= p && k <= t; ++k) y += phi[static_cast<Eigen::Index>(k - 1)] * out.values[t - k];
    out.values[t] = y;
  }
  return out;
}

SeriesSample simulate(const ARParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  if (n < 1) throw InvalidParameter("series length must be at least 1");
  Rng rng(seed);
  const double sd = std::sqrt(params.sigma2);
  std::vector<double> eps(n);
  for (auto& e : eps) e = sd * rng.normal();
  return simulate_with_innovations(params.phi, eps);
}

SufficientStats sufficient_stats(std::span<const double> y, std::size_t p) {
  if (p < 1) throw InvalidParameter("AR order must be at least 1");
  const auto pi = static_cast<Eigen::Index>(p);
  SufficientStats s;
  s.n = y.size();
  s.xtx = Eigen::MatrixXd::Zero(pi, pi);
  s.xty = Eigen::VectorXd::Zero(pi);
  Eigen::VectorXd lag = Eigen::VectorXd::Zero(pi);  // y_{t-1}, ..., y_{t-p}
  for (std::size_t t = 0; t < y.size(); ++t) {
    s.xtx.noalias() += lag * lag.transpose();
    s.xty += lag * y[t];
    s.yty += y[t] * y[t];
    for (Eigen::Index k = pi - 1; k > 0; --k) lag[k] = lag[k - 1];
    lag[0] = y[t];
  }
  return s;
}

FitResult fit_ar(const SeriesSample& series, std::size_t p) {
  if (p < 1) throw InvalidParameter("AR order must be at least 1");
  if (series.size() <= p) {
    std::ostringstream msg;
    msg << "series length " << series.size() << " must exceed the AR order " << p;
    throw InvalidParameter(msg.str());
  }
  SufficientStats s = sufficient_stats(series.view(), p);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.xtx, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(hi > 0.0) || !(condition < 1e12)) {
    std::ostringstream msg;
    msg << "degenerate design: X'X is singular (condition estimate " << condition << ")";
    throw DegenerateDesign(msg.str(), condition);
  }

  FitResult r;
  r.phi_hat = s.xtx.ldlt().solve(s.xty);
  r.xtx = std::move(s.xtx);
  r.xty = std::move(s.xty);
  r.yty = s.yty;
  r.n = s.n;

  const auto& y = series.values;
  r.residuals.resize(y.size());
  double ss = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    double e = y[t];
    for (std::size_t k = 1; k <= p && k <= t; ++k) e -= r.phi_hat[static_cast<Eigen::Index>(k - 1)] * y[t - k];
    r.residuals[t] = e;
    ss += e * e;
  }
  r.sigma2_hat = ss / static_cast<double>(y.size());
  return r;
}

double residual_sum_of_squares(const Eigen::VectorXd& phi, std::span<const double> y) {
  const auto p = static_cast<std::size_t>(phi.size());
  double a = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    double e = y[t];
    for (std::size_t k = 1; k <= p && k <= t; ++k) e -= phi[static_cast<Eigen::Index>(k - 1)] * y[t - k];
    a += e * e;
  }
  return a;
}

double residual_sum_of_squares(const Eigen::VectorXd& phi, const SufficientStats& stats) {
  return stats.yty - 2.0 * phi.dot(stats.xty) + phi.dot(stats.xtx * phi);
}

double residual_sum_of_squares_via_mle(const Eigen::VectorXd& phi, const FitResult& fit) {
  return fit.yty - phi.dot(fit.xtx * (2.0 * fit.phi_hat - phi));
}

double log_likelihood(const ARParams& params, const SufficientStats& stats) {
  params.validate();
  const double n = static_cast<double>(stats.n);
  const double a = residual_sum_of_squares(params.phi, stats);
  return -0.5 * n * std::log(2.0 * std::numbers::pi * params.sigma2) - a / (2.0 * params.sigma2);
}

double log_likelihood(const ARParams& params, const SeriesSample& series) {
  params.validate();
  const double n = static_cast<double>(series.size());
  const double a = residual_sum_of_squares(params.phi, series.view());
  return -0.5 * n * std::log(2.0 * std::numbers::pi * params.sigma2) - a / (2.0 * params.sigma2);
}

bool is_stationary_p2(const Eigen::Vector2d& phi) { return is_stationary_p2(phi[0], phi[1]); }

Eigen::MatrixXd companion_matrix(const Eigen::VectorXd& phi) {
  const Eigen::Index p = phi.size();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(p, p);
  f.row(0) = phi.transpose();
  if (p > 1) f.bottomLeftCorner(p - 1, p - 1).setIdentity();
  return f;
}

namespace {

using cplx = std::complex<double>;

// Roots of z^3 + a z^2 + b z + c (Cardano, principal cube root).
std::vector<cplx> cubic_roots(double a, double b, double c) {
  const double shift = a / 3.0;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const cplx disc = std::sqrt(cplx(q * q / 4.0 + p * p * p / 27.0, 0.0));
  cplx u = std::pow(-q / 2.0 + disc, 1.0 / 3.0);
  if (std::abs(u) < 1e-300) u = std::pow(-q / 2.0 - disc, 1.0 / 3.0);
  const cplx omega(-0.5, std::sqrt(3.0) / 2.0);
  std::vector<cplx> roots;
  if (std::abs(u) < 1e-300) {
    roots.assign(3, cplx(-shift, 0.0));  // triple root
    return roots;
  }
  cplx w = u;
  for (int k = 0; k < 3; ++k) {
    roots.push_back(w - p / (3.0 * w) - shift);
    w *= omega;
  }
  return roots;
}

}  // namespace

std::vector<std::complex<double>> companion_eigenvalues(const Eigen::VectorXd& phi) {
  // Characteristic polynomial of the companion matrix:
  // z^p - phi_1 z^{p-1} - ... - phi_p.
  switch (phi.size()) {
    case 1:
      return {cplx(phi[0], 0.0)};
    case 2: {
      const cplx disc = std::sqrt(cplx(phi[0] * phi[0] + 4.0 * phi[1], 0.0));
      return {(phi[0] + disc) / 2.0, (phi[0] - disc) / 2.0};
    }
    case 3:
      return cubic_roots(-phi[0], -phi[1], -phi[2]);
    default: {
      Eigen::EigenSolver<Eigen::MatrixXd> es(companion_matrix(phi), false);
      const auto& ev = es.eigenvalues();
      return {ev.data(), ev.data() + ev.size()};
    }
  }
}

double spectral_radius(const Eigen::VectorXd& phi) {
  double r = 0.0;
  for (const auto& z : companion_eigenvalues(phi)) r = std::max(r, std::abs(z));
  return r;
}

bool is_causal(const Eigen::VectorXd& phi, double tol) {
  if (phi.size() < 1) return false;
  return spectral_radius(phi) < 1.0 - tol;
}

CovMatrix omega_p2(const Eigen::Vector2d& phi) {
  CovMatrix c;
  c.omega.resize(2, 2);
  const double d = 1.0 - phi[1] * phi[1];
  const double off = -phi[0] * (1.0 + phi[1]);
  c.omega << d, off, off, d;
  if (!is_stationary_p2(phi)) {
    std::ostringstream msg;
    msg << "omega evaluated at (" << phi[0] << ", " << phi[1]
        << ") on or outside the stationarity triangle; matrix may be singular or indefinite";
    c.warning = msg.str();
  }
  return c;
}

CovMatrix omega_general(const Eigen::VectorXd& phi) {
  const Eigen::Index p = phi.size();
  if (p < 1) throw InvalidParameter("AR order must be at least 1");
  if (!is_causal(phi)) {
    throw SingularMatrix("I - F(x)F is singular or the coefficients are not causal (unit or explosive root)");
  }
  const Eigen::MatrixXd f = companion_matrix(phi);
  const Eigen::MatrixXd big = Eigen::MatrixXd::Identity(p * p, p * p) - Eigen::kroneckerProduct(f, f).eval();
  Eigen::VectorXd vec_m = Eigen::VectorXd::Zero(p * p);
  vec_m[0] = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(big);
  if (!lu.isInvertible()) throw SingularMatrix("I - F(x)F is singular (unit root)");
  const Eigen::VectorXd x = lu.solve(vec_m);
  Eigen::MatrixXd r = Eigen::Map<const Eigen::MatrixXd>(x.data(), p, p);  // column-major vec^{-1}

  const double asym = (r - r.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * std::max(1.0, r.cwiseAbs().maxCoeff())) {
    throw SingularMatrix("stationary second-moment matrix is not symmetric");
  }
  r = 0.5 * (r + r.transpose());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(r);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw SingularMatrix("stationary second-moment matrix is not positive definite");
  }
  CovMatrix c;
  c.omega = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
  c.omega = 0.5 * (c.omega + c.omega.transpose());
  return c;
}

CovMatrix omega_hat(const Eigen::VectorXd& phi) {
  if (phi.size() == 2) return omega_p2(Eigen::Vector2d(phi[0], phi[1]));
  return omega_general(phi);
}

Eigen::VectorXd standard_errors(const CovMatrix& omega, std::size_t n) {
  return (omega.omega.diagonal() / static_cast<double>(n)).cwiseSqrt();
}

}  // namespace arcd
