#include "arcd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "arcd/ar_core.hpp"
#include "arcd/errors.hpp"

namespace arcd {

ParamGrid2D::ParamGrid2D(double phi1_min, double phi1_max, double phi2_min, double phi2_max, std::size_t m)
    : phi1_min_(phi1_min), phi1_max_(phi1_max), phi2_min_(phi2_min), phi2_max_(phi2_max), m_(m) {
  if (m < 1) throw InvalidParameter("grid needs at least one subdivision per axis");
  if (!(phi1_max > phi1_min) || !(phi2_max > phi2_min)) throw InvalidParameter("grid window has empty extent");
  h1_ = (phi1_max - phi1_min) / static_cast<double>(m);
  h2_ = (phi2_max - phi2_min) / static_cast<double>(m);
}

ParamGrid2D ParamGrid2D::around(const Eigen::Vector2d& center, const Eigen::Vector2d& half_width, std::size_t m) {
  const auto clip = [](double v, double lo, double hi) { return std::clamp(v, lo, hi); };
  double a1 = -2.0, b1 = 2.0, a2 = -1.0, b2 = 1.0;
  if (center.allFinite() && half_width.allFinite() && (half_width.array() > 0.0).all()) {
    a1 = clip(center[0] - half_width[0], -2.0, 2.0);
    b1 = clip(center[0] + half_width[0], -2.0, 2.0);
    a2 = clip(center[1] - half_width[1], -1.0, 1.0);
    b2 = clip(center[1] + half_width[1], -1.0, 1.0);
    if (!(b1 > a1) || !(b2 > a2)) {
      a1 = -2.0, b1 = 2.0, a2 = -1.0, b2 = 1.0;
    }
  }
  return ParamGrid2D(a1, b1, a2, b2, m);
}

Eigen::Vector2d ParamGrid2D::point(std::size_t k) const noexcept {
  return {phi1_at(k % (m_ + 1)), phi2_at(k / (m_ + 1))};
}

GridNode ParamGrid2D::node(std::size_t k) const noexcept {
  GridNode n;
  n.i = k % (m_ + 1);
  n.j = k / (m_ + 1);
  n.phi1 = phi1_at(n.i);
  n.phi2 = phi2_at(n.j);
  n.in_region = is_stationary_p2(n.phi1, n.phi2);
  return n;
}

bool ParamGrid2D::in_region(std::size_t k) const noexcept {
  return is_stationary_p2(phi1_at(k % (m_ + 1)), phi2_at(k / (m_ + 1)));
}

std::vector<GridNode> ParamGrid2D::nodes() const {
  std::vector<GridNode> out;
  out.reserve(size());
  for (std::size_t k = 0; k < size(); ++k) out.push_back(node(k));
  return out;
}

std::optional<std::size_t> ParamGrid2D::nearest(const Eigen::Vector2d& p) const noexcept {
  const double u = (p[0] - phi1_min_) / h1_;
  const double v = (p[1] - phi2_min_) / h2_;
  const double top = static_cast<double>(m_);
  if (!(u >= -0.5 && u <= top + 0.5 && v >= -0.5 && v <= top + 0.5)) return std::nullopt;
  const auto i = static_cast<std::size_t>(std::clamp(std::lround(u), 0L, static_cast<long>(m_)));
  const auto j = static_cast<std::size_t>(std::clamp(std::lround(v), 0L, static_cast<long>(m_)));
  return index(i, j);
}

std::string_view to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::confidence_curve: return "confidence_curve";
    case SurfaceKind::density: return "density";
    case SurfaceKind::posterior: return "posterior";
    case SurfaceKind::log_implied_prior: return "log_implied_prior";
  }
  return "unknown";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::wald_asymptotic: return "wald_asymptotic";
    case Method::wald_bootstrap: return "wald_bootstrap";
    case Method::cd_asymptotic: return "cd_asymptotic";
    case Method::cd_bootstrap: return "cd_bootstrap";
    case Method::bayes_flat: return "bayes_flat";
    case Method::bayes_corrected: return "bayes_corrected";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::wald_asymptotic, Method::wald_bootstrap, Method::cd_asymptotic, Method::cd_bootstrap,
                   Method::bayes_flat, Method::bayes_corrected}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidParameter("unknown method '" + std::string(name) + "'");
}

bool RegionResult::contains_node(std::size_t k) const {
  return std::binary_search(member_nodes.begin(), member_nodes.end(), k);
}

bool RegionResult::contains(const Eigen::Vector2d& p) const {
  const auto k = grid.nearest(p);
  return k && contains_node(*k);
}

std::vector<std::array<std::size_t, 2>> RegionResult::cells() const {
  std::vector<std::array<std::size_t, 2>> out;
  out.reserve(member_nodes.size());
  const std::size_t w = grid.axis_points();
  for (auto k : member_nodes) out.push_back({k % w, k / w});
  return out;
}

RegionResult make_region(const ParamGrid2D& grid, double level, double threshold, std::vector<std::size_t> members) {
  std::sort(members.begin(), members.end());
  RegionResult r{grid, level, threshold, std::move(members), 0.0, std::nullopt};
  r.area = static_cast<double>(r.member_nodes.size()) * grid.cell_area();
  if (r.member_nodes.empty()) r.warning = "empty region";
  return r;
}

double positive_mass(const ConfidenceSurface& surface) {
  double mass = 0.0;
  for (std::size_t k = 0; k < surface.values.size(); ++k) {
    const double v = surface.values[k];
    if (v > 0.0 && surface.grid.in_region(k)) mass += v;
  }
  return mass * surface.grid.cell_area();
}

ConfidenceSurface normalize_density(ConfidenceSurface surface) {
  const double mass = positive_mass(surface);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw NoSolution("density surface has no positive mass inside the stationarity region");
  }
  for (auto& v : surface.values) v /= mass;
  return surface;
}

RegionResult region_from_density_mass(const ConfidenceSurface& surface, double target_mass, double level) {
  const ParamGrid2D& grid = surface.grid;
  const double area = grid.cell_area();

  // Candidate values sorted descending with prefix masses; the mass of
  // {value > K} is then a binary search.
  std::vector<double> vals;
  vals.reserve(surface.values.size());
  for (std::size_t k = 0; k < surface.values.size(); ++k) {
    const double v = surface.values[k];
    if (v > 0.0 && grid.in_region(k)) vals.push_back(v);
  }
  std::sort(vals.begin(), vals.end(), std::greater<>());
  std::vector<double> prefix(vals.size() + 1, 0.0);
  for (std::size_t i = 0; i < vals.size(); ++i) prefix[i + 1] = prefix[i] + vals[i] * area;
  const double total = prefix.back();
  const auto mass_above = [&](double k) {
    const auto it = std::lower_bound(vals.begin(), vals.end(), k, std::greater<>());
    return prefix[static_cast<std::size_t>(it - vals.begin())];
  };

  if (target_mass > total * (1.0 + 1e-12) + 1e-15) {
    std::ostringstream msg;
    msg << "target mass " << target_mass << " exceeds the available density mass " << total;
    throw NoSolution(msg.str());
  }

  double lo = 0.0;
  double hi = vals.empty() ? 0.0 : vals.front();
  if (target_mass > 0.0 && !vals.empty()) {
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      const double g = mass_above(mid) - target_mass;
      if (g >= 0.0) {
        lo = mid;
        if (g <= 1e-6) break;
      } else {
        hi = mid;
      }
    }
  } else {
    lo = hi;  // empty region
  }

  std::vector<std::size_t> members;
  for (std::size_t k = 0; k < surface.values.size(); ++k) {
    if (surface.values[k] > lo && surface.values[k] > 0.0 && grid.in_region(k)) members.push_back(k);
  }
  return make_region(grid, level, lo, std::move(members));
}

RegionResult region_from_density(const ConfidenceSurface& surface, double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidParameter("confidence level must lie in (0, 1)");
  return region_from_density_mass(surface, level, level);
}

std::vector<std::array<Eigen::Vector2d, 2>> region_boundary(const RegionResult& region) {
  const ParamGrid2D& g = region.grid;
  const std::size_t w = g.axis_points();
  const double hx = 0.5 * g.h1();
  const double hy = 0.5 * g.h2();
  std::vector<std::array<Eigen::Vector2d, 2>> edges;
  const auto member = [&](long i, long j) {
    if (i < 0 || j < 0 || i >= static_cast<long>(w) || j >= static_cast<long>(w)) return false;
    return region.contains_node(g.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  };
  for (auto k : region.member_nodes) {
    const long i = static_cast<long>(k % w);
    const long j = static_cast<long>(k / w);
    const Eigen::Vector2d c = g.point(k);
    if (!member(i - 1, j)) edges.push_back({Eigen::Vector2d(c[0] - hx, c[1] - hy), Eigen::Vector2d(c[0] - hx, c[1] + hy)});
    if (!member(i + 1, j)) edges.push_back({Eigen::Vector2d(c[0] + hx, c[1] - hy), Eigen::Vector2d(c[0] + hx, c[1] + hy)});
    if (!member(i, j - 1)) edges.push_back({Eigen::Vector2d(c[0] - hx, c[1] - hy), Eigen::Vector2d(c[0] + hx, c[1] - hy)});
    if (!member(i, j + 1)) edges.push_back({Eigen::Vector2d(c[0] - hx, c[1] + hy), Eigen::Vector2d(c[0] + hx, c[1] + hy)});
  }
  return edges;
}

std::size_t connected_components(const RegionResult& region) {
  const ParamGrid2D& g = region.grid;
  const std::size_t w = g.axis_points();
  std::vector<char> seen(g.size(), 0);
  std::size_t components = 0;
  std::vector<std::size_t> stack;
  for (auto start : region.member_nodes) {
    if (seen[start]) continue;
    ++components;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      const std::size_t i = k % w, j = k / w;
      const std::array<std::pair<bool, std::size_t>, 4> nbrs{{{i > 0, k - 1}, {i + 1 < w, k + 1}, {j > 0, k - w}, {j + 1 < w, k + w}}};
      for (auto [ok, nb] : nbrs) {
        if (ok && !seen[nb] && region.contains_node(nb)) {
          seen[nb] = 1;
          stack.push_back(nb);
        }
      }
    }
  }
  return components;
}

namespace {
void require_same_grid(const RegionResult& a, const RegionResult& b) {
  if (!(a.grid == b.grid)) throw InvalidParameter("regions live on different grids");
}
}  // namespace

double symmetric_difference_area(const RegionResult& a, const RegionResult& b) {
  require_same_grid(a, b);
  std::vector<std::size_t> diff;
  std::set_symmetric_difference(a.member_nodes.begin(), a.member_nodes.end(), b.member_nodes.begin(),
                                b.member_nodes.end(), std::back_inserter(diff));
  return static_cast<double>(diff.size()) * a.grid.cell_area();
}

double union_area(const RegionResult& a, const RegionResult& b) {
  require_same_grid(a, b);
  std::vector<std::size_t> u;
  std::set_union(a.member_nodes.begin(), a.member_nodes.end(), b.member_nodes.begin(), b.member_nodes.end(),
                 std::back_inserter(u));
  return static_cast<double>(u.size()) * a.grid.cell_area();
}

}  // namespace arcd
