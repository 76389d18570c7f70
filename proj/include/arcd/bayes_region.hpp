#pragma once

#include "arcd/ar_core.hpp"
#include "arcd/grid.hpp"
#include "arcd/parallel.hpp"

namespace arcd {

/// exp{loglik(node) - max loglik} at fixed sigma2, unnormalized. With
/// `restrict_to_triangle` the maximum and the support are the in-region
/// nodes and everything else is zero; otherwise every node of the window
/// carries likelihood.
ConfidenceSurface likelihood_surface(const SufficientStats& stats, double sigma2, const ParamGrid2D& grid,
                                     bool restrict_to_triangle, Exec exec = Exec::parallel);

/// Flat prior on the stationarity triangle: normalized likelihood over the
/// in-region cells. The series overload plugs in the ML variance.
ConfidenceSurface flat_prior_posterior(const SeriesSample& series, const ParamGrid2D& grid, Exec exec = Exec::parallel);
ConfidenceSurface flat_prior_posterior(const SufficientStats& stats, double sigma2, const ParamGrid2D& grid,
                                       Exec exec = Exec::parallel);

struct SpikeCorrection {
  double b = 0.0;     ///< reference confidence mass in the band
  double k = 0.0;     ///< likelihood mass in the band
  double a = 1.0;     ///< (1 - b)/(1 - k)
  double band = 0.0;  ///< band is {phi1 + phi2 >= 1 - band}
};

/// One cell diagonal.
double default_boundary_band(const ParamGrid2D& grid);

/// Fraction of a surface's positive mass, over the whole window, lying in
/// {phi1 + phi2 >= 1 - band}.
double boundary_band_mass(const ConfidenceSurface& surface, double band);

/// k from the untruncated likelihood, b from the untruncated reference
/// density, both normalized over the whole window. Throws NoSolution when
/// either mass reaches 1.
SpikeCorrection spike_correction(const ConfidenceSurface& likelihood_window, const ConfidenceSurface& reference_window,
                                 double band);

/// Builds both window surfaces from an AR(2) fit (ML variance, asymptotic
/// reference density) and calls the surface overload.
SpikeCorrection spike_correction(const FitResult& fit, const ParamGrid2D& grid, double band,
                                 Exec exec = Exec::parallel);

/// Level set of the normalized posterior holding mass level/a.
RegionResult corrected_region(const ConfidenceSurface& posterior, const SpikeCorrection& correction, double level);

/// True if some member node lies in {phi1 + phi2 >= 1 - band}.
bool touches_boundary_band(const RegionResult& region, double band);

}  // namespace arcd
