#include "arcd/bayes_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "arcd/cd_estimation.hpp"
#include "arcd/errors.hpp"

namespace arcd {

ConfidenceSurface likelihood_surface(const SufficientStats& stats, double sigma2, const ParamGrid2D& grid,
                                     bool restrict_to_triangle, Exec exec) {
  if (stats.order() != 2) throw InvalidParameter("likelihood surfaces are built for AR(2)");
  if (!(sigma2 > 0.0)) throw InvalidParameter("innovation variance must be positive");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> ll(grid.size(), kNegInf);
  for_each_index(grid.size(), exec, [&](std::size_t k) {
    if (restrict_to_triangle && !grid.in_region(k)) return;
    const Eigen::Vector2d phi = grid.point(k);
    ll[k] = -residual_sum_of_squares(Eigen::VectorXd(phi), stats) / (2.0 * sigma2);
  });
  const double top = *std::max_element(ll.begin(), ll.end());
  if (!std::isfinite(top)) throw NoSolution("likelihood surface has no admissible nodes");

  ConfidenceSurface s{grid, std::vector<double>(grid.size(), 0.0), SurfaceKind::posterior, Method::bayes_flat};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (ll[k] > kNegInf) s.values[k] = std::exp(ll[k] - top);
  }
  return s;
}

ConfidenceSurface flat_prior_posterior(const SufficientStats& stats, double sigma2, const ParamGrid2D& grid,
                                       Exec exec) {
  ConfidenceSurface s = likelihood_surface(stats, sigma2, grid, true, exec);
  try {
    return normalize_density(std::move(s));
  } catch (const NoSolution&) {
    throw NoSolution("posterior underflows on every in-region node; use a tighter grid window around the estimate");
  }
}

ConfidenceSurface flat_prior_posterior(const SeriesSample& series, const ParamGrid2D& grid, Exec exec) {
  const FitResult f = fit_ar(series, 2);
  return flat_prior_posterior(f.stats(), f.sigma2_hat, grid, exec);
}

double default_boundary_band(const ParamGrid2D& grid) { return std::hypot(grid.h1(), grid.h2()); }

double boundary_band_mass(const ConfidenceSurface& surface, double band) {
  double total = 0.0;
  double inside = 0.0;
  for (std::size_t k = 0; k < surface.values.size(); ++k) {
    const double v = surface.values[k];
    if (!(v > 0.0)) continue;
    total += v;
    const Eigen::Vector2d phi = surface.grid.point(k);
    if (phi[0] + phi[1] >= 1.0 - band) inside += v;
  }
  if (!(total > 0.0)) throw NoSolution("surface carries no mass over the window");
  return inside / total;
}

SpikeCorrection spike_correction(const ConfidenceSurface& likelihood_window, const ConfidenceSurface& reference_window,
                                 double band) {
  if (!(likelihood_window.grid == reference_window.grid)) {
    throw InvalidParameter("spike correction needs both surfaces on one grid");
  }
  if (!(band >= 0.0)) throw InvalidParameter("boundary band width must be nonnegative");
  SpikeCorrection c;
  c.band = band;
  c.k = boundary_band_mass(likelihood_window, band);
  c.b = boundary_band_mass(reference_window, band);
  if (c.k >= 1.0 || c.b >= 1.0) {
    std::ostringstream msg;
    msg << "degenerate spike: all mass lies in the boundary band (b = " << c.b << ", k = " << c.k << ")";
    throw NoSolution(msg.str());
  }
  c.a = (1.0 - c.b) / (1.0 - c.k);
  return c;
}

SpikeCorrection spike_correction(const FitResult& fit, const ParamGrid2D& grid, double band, Exec exec) {
  const ConfidenceSurface lik = likelihood_surface(fit.stats(), fit.sigma2_hat, grid, false, exec);
  const ConfidenceSurface ref = asymptotic_density_surface(fit, grid, false, exec);
  return spike_correction(lik, ref, band);
}

RegionResult corrected_region(const ConfidenceSurface& posterior, const SpikeCorrection& correction, double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidParameter("confidence level must lie in (0, 1)");
  if (!(correction.a > 0.0)) throw InvalidParameter("correction factor must be positive");
  const double target = level / correction.a;
  if (target > 1.0) {
    std::ostringstream msg;
    msg << "corrected target mass " << target << " exceeds 1";
    throw NoSolution(msg.str());
  }
  RegionResult r = region_from_density_mass(posterior, target, level);
  return r;
}

bool touches_boundary_band(const RegionResult& region, double band) {
  return std::any_of(region.member_nodes.begin(), region.member_nodes.end(), [&](std::size_t k) {
    const Eigen::Vector2d phi = region.grid.point(k);
    return phi[0] + phi[1] >= 1.0 - band;
  });
}

}  // namespace arcd
