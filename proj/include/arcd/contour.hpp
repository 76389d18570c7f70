#pragma once

#include <vector>

#include "arcd/grid.hpp"

namespace arcd {

using Polyline = std::vector<Eigen::Vector2d>;

struct ContourLevel {
  double level = 0.0;
  std::vector<Polyline> lines;  ///< closed lines repeat their first point at the end
};

/// Iso-lines of a surface by marching squares with linear interpolation.
/// Cells with a non-finite corner are skipped; saddles are split by the cell
/// mean.
std::vector<ContourLevel> contour_lines(const ConfidenceSurface& surface, const std::vector<double>& levels);

}  // namespace arcd
