#include "arcd/experiments.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "arcd/bayes_region.hpp"
#include "arcd/cd_estimation.hpp"
#include "arcd/errors.hpp"
#include "arcd/implied_prior.hpp"
#include "arcd/wald_region.hpp"

namespace arcd {

ConfidenceSurface build_surface(Method method, const SeriesSample& series, const FitResult& fit,
                                const ParamGrid2D& grid, const MethodOptions& options, std::uint64_t seed,
                                Exec exec) {
  switch (method) {
    case Method::wald_asymptotic:
      return confidence_curve(fit, grid, method, {}, exec);
    case Method::wald_bootstrap: {
      const WaldBootstrap b = bootstrap_wald(series, fit, options.n_bootstrap, derive_seed(seed, 1), exec);
      return confidence_curve(fit, grid, method, b.q_sorted, exec);
    }
    case Method::cd_asymptotic:
      return normalize_density(asymptotic_density_surface(fit, grid, true, exec));
    case Method::cd_bootstrap: {
      const ParamGrid2D coarse(grid.phi1_min(), grid.phi1_max(), grid.phi2_min(), grid.phi2_max(), options.m_cdf);
      const Eigen::Vector2d obs(fit.phi_hat[0], fit.phi_hat[1]);
      const CdfGridEstimate est =
          estimate_cdf_grid(coarse, obs, fit.n, options.cdf_sigma2, options.n_mc, derive_seed(seed, 2), exec);
      return normalize_density(bootstrap_density_surface(fit_probit_quadratic(est, fit.n), grid));
    }
    case Method::bayes_flat:
      return flat_prior_posterior(fit.stats(), fit.sigma2_hat, grid, exec);
    case Method::bayes_corrected:
      break;
  }
  throw InvalidParameter("bayes_corrected is a region, not a surface; use corrected_region");
}

RegionResult region_at(const ConfidenceSurface& surface, double level) {
  if (surface.kind == SurfaceKind::confidence_curve) return region_from_curve(surface, level);
  return region_from_density(surface, level);
}

void ExperimentConfig::validate() const {
  if (replicates < 1) throw InvalidParameter("replicates must be at least 1");
  if (n_values.empty() || levels.empty() || methods.empty()) {
    throw InvalidParameter("n_values, levels and methods must be nonempty");
  }
  for (auto n : n_values) {
    if (n < 3) throw InvalidParameter("every sample size must exceed the AR order 2");
  }
  for (double l : levels) {
    if (!(l > 0.0 && l < 1.0)) throw InvalidParameter("every level must lie in (0, 1)");
  }
  for (auto m : methods) {
    if (m == Method::bayes_corrected) throw InvalidParameter("bayes_corrected is not part of the coverage study");
  }
  if (!is_stationary_p2(phi0)) throw InvalidParameter("phi0 must lie inside the stationarity triangle");
  if (!(sigma2 > 0.0)) throw InvalidParameter("sigma2 must be positive");
  if (m < 2 || options.m_cdf < 2) throw InvalidParameter("grids need at least 2 subdivisions");
  if (options.n_bootstrap < 1 || options.n_mc < 1) throw InvalidParameter("Monte Carlo sizes must be positive");
}

namespace {

struct ReplicateOutcome {
  // Indexed [method][level]; nullopt when the method failed.
  std::vector<std::optional<std::vector<std::pair<bool, double>>>> per_method;
};

}  // namespace

std::vector<CoverageRow> run_coverage_study(const ExperimentConfig& config, Exec exec) {
  config.validate();
  const ARParams truth{Eigen::VectorXd(config.phi0), config.sigma2};
  std::vector<CoverageRow> rows;
  for (std::size_t n : config.n_values) {
    const std::uint64_t n_seed = derive_seed(config.root_seed, n);
    std::vector<ReplicateOutcome> out(config.replicates);
    for_each_index(config.replicates, exec, [&](std::size_t r) {
      const std::uint64_t rep_seed = derive_seed(n_seed, r);
      ReplicateOutcome& o = out[r];
      o.per_method.resize(config.methods.size());
      const SeriesSample series = simulate(truth, n, derive_seed(rep_seed, 0));
      std::optional<FitResult> fit;
      std::optional<ParamGrid2D> grid;
      try {
        fit = fit_ar(series, 2);
        grid = default_window(*fit, config.m, config.se_multiple);
      } catch (const Error&) {
        return;  // every method fails for this replicate
      }
      for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        try {
          const ConfidenceSurface s =
              build_surface(config.methods[mi], series, *fit, *grid, config.options, rep_seed, Exec::serial);
          std::vector<std::pair<bool, double>> res;
          for (double level : config.levels) {
            const RegionResult reg = region_at(s, level);
            res.emplace_back(reg.contains(config.phi0), reg.area);
          }
          o.per_method[mi] = std::move(res);
        } catch (const Error&) {
          o.per_method[mi].reset();
        }
      }
    });

    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      for (std::size_t li = 0; li < config.levels.size(); ++li) {
        CoverageRow row;
        row.n = n;
        row.method = config.methods[mi];
        row.level = config.levels[li];
        double covered = 0.0, area = 0.0;
        for (const auto& o : out) {
          if (o.per_method.empty() || !o.per_method[mi]) {
            ++row.failures;
            continue;
          }
          const auto& [hit, a] = (*o.per_method[mi])[li];
          covered += hit ? 1.0 : 0.0;
          area += a;
          ++row.replicates;
        }
        row.aborted = static_cast<double>(row.failures) > 0.01 * static_cast<double>(config.replicates);
        if (row.aborted || row.replicates == 0) {
          row.aborted = true;
          row.coverage = row.mc_se = row.mean_area = std::nan("");
        } else {
          const double reps = static_cast<double>(row.replicates);
          row.coverage = covered / reps;
          row.mean_area = area / reps;
          row.mc_se = std::sqrt(row.coverage * (1.0 - row.coverage) / reps);
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

ImpliedPriorStudy run_implied_prior_study(const Eigen::Vector2d& phi0, std::size_t n, std::size_t replications,
                                          const ParamGrid2D& grid, std::uint64_t seed, double sigma2,
                                          bool use_ml_sigma2, Exec exec) {
  if (replications < 1) throw InvalidParameter("replications must be at least 1");
  if (!is_stationary_p2(phi0)) throw InvalidParameter("phi0 must lie inside the stationarity triangle");
  const ARParams truth{Eigen::VectorXd(phi0), sigma2};
  truth.validate();

  std::vector<std::vector<double>> per_rep(replications);
  for_each_index(replications, exec, [&](std::size_t r) {
    try {
      const SeriesSample series = simulate(truth, n, derive_seed(seed, r));
      const FitResult fit = fit_ar(series, 2);
      const double s2 = use_ml_sigma2 ? fit.sigma2_hat : sigma2;
      per_rep[r] = implied_prior_residual_surface(fit, grid, s2, Exec::serial).values;
    } catch (const Error&) {
      per_rep[r].clear();
    }
  });

  ImpliedPriorStudy study{
      ConfidenceSurface{grid, std::vector<double>(grid.size(), 0.0), SurfaceKind::log_implied_prior,
                        Method::cd_asymptotic},
      ConfidenceSurface{grid, std::vector<double>(grid.size(), 0.0), SurfaceKind::log_implied_prior,
                        Method::cd_asymptotic},
      0, 0};
  for (const auto& v : per_rep) {
    if (v.empty()) {
      ++study.failures;
      continue;
    }
    ++study.replications;
    for (std::size_t k = 0; k < v.size(); ++k) {
      study.mean.values[k] += v[k];
      study.mean_abs.values[k] += std::abs(v[k]);
    }
  }
  if (study.replications == 0) throw NoSolution("every implied-prior replication failed");
  const double reps = static_cast<double>(study.replications);
  for (auto& v : study.mean.values) v /= reps;
  for (auto& v : study.mean_abs.values) v /= reps;
  return study;
}

}  // namespace arcd
