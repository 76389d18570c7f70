#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arcd/ar_core.hpp"
#include "arcd/grid.hpp"
#include "arcd/parallel.hpp"

namespace arcd {

/// Tuning knobs shared by the four region constructions.
struct MethodOptions {
  std::size_t n_bootstrap = 500;  ///< Wald bootstrap replicates
  std::size_t n_mc = 500;         ///< orthant-CDF replicates per node
  std::size_t m_cdf = 30;         ///< subdivisions of the coarser CDF grid
  double cdf_sigma2 = 1.0;        ///< innovation variance of the CDF simulations
};

/// Surface of one method on `grid`: a confidence curve for the Wald methods,
/// a normalized density for cd_asymptotic, cd_bootstrap and bayes_flat.
/// Stochastic methods use streams derived from `seed`.
ConfidenceSurface build_surface(Method method, const SeriesSample& series, const FitResult& fit,
                                const ParamGrid2D& grid, const MethodOptions& options, std::uint64_t seed,
                                Exec exec = Exec::parallel);

/// Curve thresholding or density level set, depending on the surface kind.
RegionResult region_at(const ConfidenceSurface& surface, double level);

struct ExperimentConfig {
  Eigen::Vector2d phi0 = Eigen::Vector2d::Zero();
  double sigma2 = 1.0;
  std::vector<std::size_t> n_values{50, 100, 200, 400};
  std::vector<double> levels{0.90, 0.95};
  std::vector<Method> methods{Method::cd_bootstrap, Method::cd_asymptotic, Method::wald_asymptotic,
                              Method::wald_bootstrap};
  std::size_t replicates = 2000;
  MethodOptions options;
  std::size_t m = 100;        ///< grid subdivisions per axis
  double se_multiple = 5.0;   ///< half-width of the per-replicate window
  std::uint64_t root_seed = 1;

  /// Throws InvalidParameter on an unusable configuration.
  void validate() const;
};

struct CoverageRow {
  std::size_t n = 0;
  Method method = Method::wald_asymptotic;
  double level = 0.0;
  double coverage = 0.0;
  double mc_se = 0.0;
  double mean_area = 0.0;
  std::size_t replicates = 0;  ///< successful replicates behind the row
  std::size_t failures = 0;
  bool aborted = false;  ///< more than 1% of replicates failed
};

/// One row per (n, method, level) in that nesting order. Replicate r at
/// sample size n draws from stream derive_seed(derive_seed(root, n), r).
std::vector<CoverageRow> run_coverage_study(const ExperimentConfig& config, Exec exec = Exec::parallel);

struct ImpliedPriorStudy {
  ConfidenceSurface mean;      ///< nodewise mean residual
  ConfidenceSurface mean_abs;  ///< nodewise mean absolute residual
  std::size_t replications = 0;
  std::size_t failures = 0;
};

/// Mean implied-prior residual over replications simulated at phi0. The
/// likelihood uses the true sigma2, or the ML estimate with `use_ml_sigma2`.
ImpliedPriorStudy run_implied_prior_study(const Eigen::Vector2d& phi0, std::size_t n, std::size_t replications,
                                          const ParamGrid2D& grid, std::uint64_t seed, double sigma2 = 1.0,
                                          bool use_ml_sigma2 = false, Exec exec = Exec::parallel);

}  // namespace arcd
