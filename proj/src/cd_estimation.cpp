#include "arcd/cd_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "arcd/errors.hpp"
#include "arcd/kernels.hpp"
#include "arcd/stats.hpp"

namespace arcd {

namespace {

double det2(const Eigen::MatrixXd& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

}  // namespace

double log_cd_asymptotic_density(const Eigen::Vector2d& phi, const Eigen::Vector2d& phi_hat_obs,
                                 const CovMatrix& omega, std::size_t n) {
  const double det = det2(omega.omega);
  if (!(det > 0.0)) throw SingularMatrix("asymptotic confidence density needs a positive definite omega");
  const double nn = static_cast<double>(n);
  const double q = kernels::wald_form_2x2(phi_hat_obs, phi, omega.omega, nn);
  return std::log(nn / (2.0 * std::numbers::pi)) - 0.5 * std::log(det) - 0.5 * q;
}

double cd_asymptotic_density(const Eigen::Vector2d& phi, const Eigen::Vector2d& phi_hat_obs, const CovMatrix& omega,
                             std::size_t n) {
  return std::exp(log_cd_asymptotic_density(phi, phi_hat_obs, omega, n));
}

ConfidenceSurface asymptotic_density_surface(const FitResult& fit, const ParamGrid2D& grid, bool restrict_to_triangle,
                                             Exec exec) {
  if (fit.order() != 2) throw InvalidParameter("density surfaces are built for AR(2) fits");
  const Eigen::Vector2d obs(fit.phi_hat[0], fit.phi_hat[1]);
  const CovMatrix om = omega_p2(obs);
  if (!(det2(om.omega) > 0.0)) throw SingularMatrix("omega at the estimate is not positive definite");
  ConfidenceSurface s{grid, std::vector<double>(grid.size(), 0.0), SurfaceKind::density, Method::cd_asymptotic};
  for_each_index(grid.axis_points(), exec, [&](std::size_t j) {
    for (std::size_t i = 0; i < grid.axis_points(); ++i) {
      const Eigen::Vector2d node(grid.phi1_at(i), grid.phi2_at(j));
      if (restrict_to_triangle && !is_stationary_p2(node)) continue;
      s.values[grid.index(i, j)] = cd_asymptotic_density(node, obs, om, fit.n);
    }
  });
  return s;
}

CdfGridEstimate estimate_cdf_grid(const ParamGrid2D& grid, const Eigen::Vector2d& phi_hat_obs, std::size_t n,
                                  double sigma2, std::size_t n_mc, std::uint64_t seed, Exec exec) {
  if (n_mc < 1) throw InvalidParameter("need at least one Monte Carlo replicate per node");
  if (n < 3) throw InvalidParameter("series length must exceed the AR order 2");
  if (!(sigma2 > 0.0)) throw InvalidParameter("innovation variance must be positive");
  const double sd = std::sqrt(sigma2);
  CdfGridEstimate est{grid, std::vector<double>(grid.size(), std::nan("")), n_mc, phi_hat_obs};
  const Rng root(seed);
  for_each_index(grid.size(), exec, [&](std::size_t k) {
    const Eigen::Vector2d node = grid.point(k);
    if (!is_stationary_p2(node)) return;
    Rng rng = root.split(k);
    std::size_t exceed = 0;
    std::size_t failures = 0;
    for (std::size_t r = 0; r < n_mc;) {
      const auto refit = kernels::simulate_fit_ar2(node[0], node[1], n, [&] { return sd * rng.normal(); });
      if (!refit) {
        if (++failures > n_mc) throw DegenerateDesign("orthant CDF: too many singular refits", 0.0);
        continue;  // redraw
      }
      if ((*refit)[0] > phi_hat_obs[0] && (*refit)[1] > phi_hat_obs[1]) ++exceed;
      ++r;
    }
    est.cdf[k] = static_cast<double>(exceed) / static_cast<double>(n_mc);
  });
  return est;
}

double default_delta(std::size_t n, double phi1, double phi2) {
  const double d = std::exp(6.04 - 2.64 * std::log(static_cast<double>(n)) + 4.39 * phi1 + 9.92 * phi2);
  return std::max(1e-6, std::min(0.1, d));
}

ProbitQuadFit fit_probit_quadratic(const CdfGridEstimate& estimate, std::size_t n, const DeltaRule& delta_rule) {
  constexpr double kClip = 1e-12;
  std::vector<std::array<double, 3>> rows;  // phi1, phi2, probit
  double delta_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < estimate.cdf.size(); ++k) {
    const double c = estimate.cdf[k];
    if (!std::isfinite(c) || c <= 0.0 || c >= 1.0) continue;
    const Eigen::Vector2d node = estimate.grid.point(k);
    const double delta = delta_rule(n, node[0], node[1]);
    if (!(c > delta && c < 1.0 - delta)) continue;
    delta_min = std::min(delta_min, delta);
    rows.push_back({node[0], node[1], normal_quantile(std::clamp(c, kClip, 1.0 - kClip))});
  }
  if (rows.size() < 6) {
    std::ostringstream msg;
    msg << "probit-quadratic regression is under-identified: " << rows.size()
        << " usable grid nodes after truncation (need at least 6)";
    throw InvalidParameter(msg.str());
  }

  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd x(m, 6);
  Eigen::VectorXd y(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto [a, b, z] = rows[static_cast<std::size_t>(r)];
    x.row(r) << 1.0, a, b, a * a, b * b, a * b;
    y[r] = z;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < 6) {
    std::ostringstream msg;
    msg << "probit-quadratic regression is rank deficient on " << rows.size() << " usable grid nodes";
    throw InvalidParameter(msg.str());
  }
  const Eigen::VectorXd c = qr.solve(y);
  if (!c.allFinite()) throw SingularMatrix("probit-quadratic regression produced non-finite coefficients");

  ProbitQuadFit f;
  f.c0 = c[0];
  f.c1 = c[1];
  f.c2 = c[2];
  f.c11 = c[3];
  f.c22 = c[4];
  f.c12 = c[5];
  f.n_used = rows.size();
  f.delta = delta_min;
  return f;
}

double cd_bootstrap_density(const ProbitQuadFit& f, const Eigen::Vector2d& phi) {
  const double a = phi[0], b = phi[1];
  const double z = f.z(a, b);
  const double dz1 = f.c1 + 2.0 * f.c11 * a + f.c12 * b;
  const double dz2 = f.c2 + 2.0 * f.c22 * b + f.c12 * a;
  return (f.c12 - dz1 * dz2 * z) * normal_pdf(z);
}

ConfidenceSurface bootstrap_density_surface(const ProbitQuadFit& fit, const ParamGrid2D& grid) {
  ConfidenceSurface s{grid, std::vector<double>(grid.size(), 0.0), SurfaceKind::density, Method::cd_bootstrap};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Eigen::Vector2d node = grid.point(k);
    if (is_stationary_p2(node)) s.values[k] = cd_bootstrap_density(fit, node);
  }
  return s;
}

}  // namespace arcd
