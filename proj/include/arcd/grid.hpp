#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace arcd {

struct GridNode {
  std::size_t i = 0;  ///< index along phi1
  std::size_t j = 0;  ///< index along phi2
  double phi1 = 0.0;
  double phi2 = 0.0;
  bool in_region = false;  ///< strictly inside the AR(2) stationarity triangle
};

/// Rectangular grid phi_j = min_j, min_j + h_j, ..., max_j with
/// h_j = (max_j - min_j)/m, i.e. (m+1)^2 nodes. Each node stands for one
/// cell of area h1*h2 in Riemann sums. Node index k = j*(m+1) + i.
class ParamGrid2D {
 public:
  ParamGrid2D(double phi1_min, double phi1_max, double phi2_min, double phi2_max, std::size_t m);

  /// Window center +- half_width, clipped to the triangle's bounding box
  /// [-2, 2] x [-1, 1].
  static ParamGrid2D around(const Eigen::Vector2d& center, const Eigen::Vector2d& half_width, std::size_t m);

  double phi1_min() const noexcept { return phi1_min_; }
  double phi1_max() const noexcept { return phi1_max_; }
  double phi2_min() const noexcept { return phi2_min_; }
  double phi2_max() const noexcept { return phi2_max_; }
  std::size_t m() const noexcept { return m_; }
  std::size_t axis_points() const noexcept { return m_ + 1; }
  std::size_t size() const noexcept { return (m_ + 1) * (m_ + 1); }
  double h1() const noexcept { return h1_; }
  double h2() const noexcept { return h2_; }
  double cell_area() const noexcept { return h1_ * h2_; }

  std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * (m_ + 1) + i; }
  double phi1_at(std::size_t i) const noexcept { return phi1_min_ + static_cast<double>(i) * h1_; }
  double phi2_at(std::size_t j) const noexcept { return phi2_min_ + static_cast<double>(j) * h2_; }
  Eigen::Vector2d point(std::size_t k) const noexcept;
  GridNode node(std::size_t k) const noexcept;
  bool in_region(std::size_t k) const noexcept;
  std::vector<GridNode> nodes() const;

  /// Node nearest to `p`, or nullopt if p lies outside the grid window by
  /// more than half a cell.
  std::optional<std::size_t> nearest(const Eigen::Vector2d& p) const noexcept;

  bool operator==(const ParamGrid2D&) const = default;

 private:
  double phi1_min_, phi1_max_, phi2_min_, phi2_max_;
  std::size_t m_;
  double h1_, h2_;
};

enum class SurfaceKind { confidence_curve, density, posterior, log_implied_prior };
enum class Method { wald_asymptotic, wald_bootstrap, cd_asymptotic, cd_bootstrap, bayes_flat, bayes_corrected };

std::string_view to_string(SurfaceKind kind);
std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Per-node scalar field over a grid.
struct ConfidenceSurface {
  ParamGrid2D grid;
  std::vector<double> values;
  SurfaceKind kind = SurfaceKind::density;
  Method method = Method::cd_asymptotic;
};

/// One (1 - alpha) region: member nodes (sorted) and area = count * cell_area.
struct RegionResult {
  ParamGrid2D grid;
  double level = 0.0;
  double threshold = 0.0;
  std::vector<std::size_t> member_nodes;
  double area = 0.0;
  std::optional<std::string> warning;

  bool contains_node(std::size_t k) const;
  /// Membership of the grid node nearest to p; false outside the window.
  bool contains(const Eigen::Vector2d& p) const;
  std::vector<std::array<std::size_t, 2>> cells() const;
};

RegionResult make_region(const ParamGrid2D& grid, double level, double threshold, std::vector<std::size_t> members);

/// Riemann mass sum_{in-region, value > 0} value * cell_area.
double positive_mass(const ConfidenceSurface& surface);

/// Rescales so the positive part integrates to 1 over in-region cells.
/// Negative values are kept (scaled) but carry no mass.
ConfidenceSurface normalize_density(ConfidenceSurface surface);

/// Density level set {value > K} whose positive mass equals `target_mass`.
/// K is found by bisection on the (step) mass function; the returned region
/// is the smallest level set with mass >= target. Throws NoSolution when the
/// target exceeds the available mass.
RegionResult region_from_density_mass(const ConfidenceSurface& surface, double target_mass, double level);

/// (1 - alpha) region of a normalized density surface.
RegionResult region_from_density(const ConfidenceSurface& surface, double level);

/// Unit-length cell edges bounding the member set, as segments in
/// parameter coordinates (cell k spans its node +- h/2).
std::vector<std::array<Eigen::Vector2d, 2>> region_boundary(const RegionResult& region);

/// Number of 4-connected components in the member set.
std::size_t connected_components(const RegionResult& region);

/// Area of the symmetric difference of two regions on the same grid.
double symmetric_difference_area(const RegionResult& a, const RegionResult& b);
double union_area(const RegionResult& a, const RegionResult& b);

}  // namespace arcd
