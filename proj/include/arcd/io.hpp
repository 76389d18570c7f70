#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "arcd/ar_core.hpp"
#include "arcd/bayes_region.hpp"
#include "arcd/cd_estimation.hpp"
#include "arcd/contour.hpp"
#include "arcd/experiments.hpp"
#include "arcd/grid.hpp"

namespace arcd::io {

/// Six significant digits, the precision of every emitted number.
std::string fmt(double x);

/// Single-column series; with `header` the first line is skipped. Blank
/// lines are ignored. Throws InvalidParameter on unparsable values.
SeriesSample read_series_csv(std::istream& in, bool header);
SeriesSample read_series_csv(const std::string& path, bool header);
void write_series_csv(std::ostream& out, const SeriesSample& series, bool header = true);

/// Columns phi1, phi2, value, in_region.
void write_surface_csv(std::ostream& out, const ConfidenceSurface& surface);

struct SurfaceRow {
  double phi1, phi2, value;
  bool in_region;
};
std::vector<SurfaceRow> read_surface_csv(std::istream& in);

/// {level, threshold, area, cells: [[i, j], ...]}
nlohmann::json region_json(const RegionResult& region);
nlohmann::json probit_fit_json(const ProbitQuadFit& fit);
nlohmann::json spike_json(const SpikeCorrection& c);
nlohmann::json contour_json(const std::vector<ContourLevel>& levels);

/// Columns n, method, level, coverage, mc_se, mean_area, replicates, failures.
void write_coverage_csv(std::ostream& out, const std::vector<CoverageRow>& rows);

/// Reads the keys phi0, sigma2, n_values, levels, methods, replicates,
/// n_bootstrap, n_mc, m, m_cdf, se_multiple and seed; missing keys keep the
/// values already in `base`.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

}  // namespace arcd::io
