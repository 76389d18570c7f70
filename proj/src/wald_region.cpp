#include "arcd/wald_region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "arcd/errors.hpp"
#include "arcd/kernels.hpp"
#include "arcd/stats.hpp"

namespace arcd {

double wald_statistic(const Eigen::VectorXd& phi0, const Eigen::VectorXd& phi_hat, const CovMatrix& omega,
                      std::size_t n) {
  if (phi0.size() != phi_hat.size() || omega.omega.rows() != phi0.size()) {
    throw InvalidParameter("wald_statistic: dimension mismatch");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(omega.omega);
  if (!lu.isInvertible()) throw SingularMatrix("wald_statistic: omega is singular");
  const Eigen::VectorXd d = phi_hat - phi0;
  return static_cast<double>(n) * d.dot(lu.solve(d));
}

namespace {

std::vector<double> centred(const std::vector<double>& r) {
  double mean = 0.0;
  for (double v : r) mean += v;
  mean /= static_cast<double>(r.size());
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] - mean;
  return out;
}

// One bootstrap Q for AR(2) through the fused kernel; NaN on a singular refit.
double bootstrap_q_ar2(const Eigen::Vector2d& phi_obs, const std::vector<double>& resid, Rng& rng) {
  const std::size_t n = resid.size();
  const auto est = kernels::simulate_fit_ar2(phi_obs[0], phi_obs[1], n, [&] { return resid[rng.index(n)]; });
  if (!est) return std::nan("");
  const Eigen::Matrix2d om = omega_p2(*est).omega;
  return kernels::wald_form_2x2(phi_obs, *est, om, static_cast<double>(n));
}

double bootstrap_q_general(const FitResult& fit, const std::vector<double>& resid, Rng& rng) {
  const std::size_t n = resid.size();
  std::vector<double> eps(n);
  for (auto& e : eps) e = resid[rng.index(n)];
  const SeriesSample s = simulate_with_innovations(fit.phi_hat, eps);
  try {
    const FitResult refit = fit_ar(s, fit.order());
    return wald_statistic(fit.phi_hat, refit.phi_hat, omega_hat(refit.phi_hat), n);
  } catch (const Error&) {
    return std::nan("");
  }
}

}  // namespace

WaldBootstrap bootstrap_wald(const SeriesSample& series, const FitResult& fit, std::size_t replicates,
                             std::uint64_t seed, Exec exec) {
  if (replicates < 1) throw InvalidParameter("bootstrap needs at least one replicate");
  const std::vector<double> resid = centred(fit.residuals);
  const std::size_t p = fit.order();
  const Eigen::Vector2d phi2 = p == 2 ? Eigen::Vector2d(fit.phi_hat[0], fit.phi_hat[1]) : Eigen::Vector2d::Zero();
  (void)series;

  WaldBootstrap out;
  out.q_sorted.resize(replicates);
  std::vector<std::size_t> redraws(replicates, 0);
  const Rng root(seed);
  for_each_index(replicates, exec, [&](std::size_t k) {
    Rng rng = root.split(k);
    for (std::size_t attempt = 0;; ++attempt) {
      const double q = p == 2 ? bootstrap_q_ar2(phi2, resid, rng) : bootstrap_q_general(fit, resid, rng);
      if (std::isfinite(q)) {
        out.q_sorted[k] = q;
        redraws[k] = attempt;
        return;
      }
      if (attempt >= replicates) {
        redraws[k] = attempt + 1;
        out.q_sorted[k] = std::nan("");
        return;
      }
    }
  });
  for (auto r : redraws) out.redraws += r;
  if (out.redraws > replicates) {
    std::ostringstream msg;
    msg << "bootstrap failed: " << out.redraws << " singular refits for " << replicates << " replicates";
    throw DegenerateDesign(msg.str(), std::numeric_limits<double>::infinity());
  }
  std::sort(out.q_sorted.begin(), out.q_sorted.end());
  return out;
}

std::vector<double> bootstrap_wald_distribution(const SeriesSample& series, std::size_t p, std::size_t replicates,
                                                std::uint64_t seed, Exec exec) {
  const FitResult f = fit_ar(series, p);
  return bootstrap_wald(series, f, replicates, seed, exec).q_sorted;
}

ParamGrid2D default_window(const FitResult& fit, std::size_t m, double se_multiple) {
  if (fit.order() != 2) throw InvalidParameter("grids are two-dimensional; fit an AR(2)");
  const Eigen::Vector2d center(fit.phi_hat[0], fit.phi_hat[1]);
  const Eigen::VectorXd se = standard_errors(omega_p2(center), fit.n);
  return ParamGrid2D::around(center, se_multiple * Eigen::Vector2d(se[0], se[1]), m);
}

ConfidenceSurface confidence_curve(const FitResult& fit, const ParamGrid2D& grid, Method method,
                                   std::span<const double> bootstrap_q_sorted, Exec exec) {
  if (fit.order() != 2) throw InvalidParameter("confidence curves are built for AR(2) fits");
  if (method != Method::wald_asymptotic && method != Method::wald_bootstrap) {
    throw InvalidParameter("confidence_curve supports wald_asymptotic and wald_bootstrap");
  }
  if (method == Method::wald_bootstrap && bootstrap_q_sorted.empty()) {
    throw InvalidParameter("wald_bootstrap needs a bootstrap distribution");
  }
  const Eigen::Vector2d phi_obs(fit.phi_hat[0], fit.phi_hat[1]);
  const Eigen::Matrix2d om = omega_p2(phi_obs).omega;
  if (om.determinant() == 0.0) throw SingularMatrix("omega at the estimate is singular");
  const double n = static_cast<double>(fit.n);
  const double nq = static_cast<double>(bootstrap_q_sorted.size());

  ConfidenceSurface s{grid, std::vector<double>(grid.size(), 1.0), SurfaceKind::confidence_curve, method};
  for_each_index(grid.axis_points(), exec, [&](std::size_t j) {
    for (std::size_t i = 0; i < grid.axis_points(); ++i) {
      const std::size_t k = grid.index(i, j);
      const Eigen::Vector2d node(grid.phi1_at(i), grid.phi2_at(j));
      if (!is_stationary_p2(node)) continue;
      const double q = kernels::wald_form_2x2(phi_obs, node, om, n);
      if (method == Method::wald_asymptotic) {
        s.values[k] = chi2_cdf(q, 2);
      } else {
        const auto below = std::lower_bound(bootstrap_q_sorted.begin(), bootstrap_q_sorted.end(), q);
        s.values[k] = static_cast<double>(below - bootstrap_q_sorted.begin()) / nq;
      }
    }
  });
  return s;
}

ConfidenceSurface confidence_curve(const SeriesSample& series, const ParamGrid2D& grid, Method method,
                                   std::size_t bootstrap_replicates, std::uint64_t seed, Exec exec) {
  const FitResult f = fit_ar(series, 2);
  if (method == Method::wald_bootstrap) {
    const WaldBootstrap b = bootstrap_wald(series, f, bootstrap_replicates, seed, exec);
    return confidence_curve(f, grid, method, b.q_sorted, exec);
  }
  return confidence_curve(f, grid, method, {}, exec);
}

RegionResult region_from_curve(const ConfidenceSurface& surface, double level) {
  if (surface.kind != SurfaceKind::confidence_curve) throw InvalidParameter("region_from_curve needs a confidence curve");
  if (!(level >= 0.0 && level < 1.0)) throw InvalidParameter("confidence level must lie in [0, 1)");
  std::vector<std::size_t> members;
  for (std::size_t k = 0; k < surface.values.size(); ++k) {
    if (surface.grid.in_region(k) && surface.values[k] <= level) members.push_back(k);
  }
  return make_region(surface.grid, level, level, std::move(members));
}

}  // namespace arcd
