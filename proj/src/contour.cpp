#include "arcd/contour.hpp"

#include <cmath>
#include <optional>
#include <unordered_map>

namespace arcd {

namespace {

// Grid edges are keyed 2k (towards i+1) and 2k+1 (towards j+1) from node k.
struct Segment {
  std::size_t a, b;
};

std::vector<Segment> march(const ConfidenceSurface& s, double level) {
  const ParamGrid2D& g = s.grid;
  const std::size_t w = g.axis_points();
  std::vector<Segment> segs;
  for (std::size_t j = 0; j + 1 < w; ++j) {
    for (std::size_t i = 0; i + 1 < w; ++i) {
      const std::size_t k00 = g.index(i, j), k10 = g.index(i + 1, j);
      const std::size_t k01 = g.index(i, j + 1), k11 = g.index(i + 1, j + 1);
      const double v00 = s.values[k00], v10 = s.values[k10], v01 = s.values[k01], v11 = s.values[k11];
      if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v01) || !std::isfinite(v11)) continue;
      const int code = (v00 > level) | (v10 > level) << 1 | (v11 > level) << 2 | (v01 > level) << 3;
      if (code == 0 || code == 15) continue;
      const std::size_t bottom = 2 * k00, left = 2 * k00 + 1, top = 2 * k01, right = 2 * k10 + 1;
      const bool centre_above = 0.25 * (v00 + v10 + v01 + v11) > level;
      switch (code) {
        case 1: case 14: segs.push_back({left, bottom}); break;
        case 2: case 13: segs.push_back({bottom, right}); break;
        case 3: case 12: segs.push_back({left, right}); break;
        case 4: case 11: segs.push_back({right, top}); break;
        case 6: case 9: segs.push_back({bottom, top}); break;
        case 7: case 8: segs.push_back({left, top}); break;
        case 5:
          if (centre_above) {
            segs.push_back({left, top});
            segs.push_back({bottom, right});
          } else {
            segs.push_back({left, bottom});
            segs.push_back({right, top});
          }
          break;
        case 10:
          if (centre_above) {
            segs.push_back({left, bottom});
            segs.push_back({right, top});
          } else {
            segs.push_back({left, top});
            segs.push_back({bottom, right});
          }
          break;
        default: break;
      }
    }
  }
  return segs;
}

Eigen::Vector2d edge_point(const ConfidenceSurface& s, std::size_t edge, double level) {
  const ParamGrid2D& g = s.grid;
  const std::size_t k0 = edge / 2;
  const std::size_t k1 = edge % 2 == 0 ? k0 + 1 : k0 + g.axis_points();
  const double v0 = s.values[k0], v1 = s.values[k1];
  const double t = v1 == v0 ? 0.5 : (level - v0) / (v1 - v0);
  return g.point(k0) + t * (g.point(k1) - g.point(k0));
}

}  // namespace

std::vector<ContourLevel> contour_lines(const ConfidenceSurface& surface, const std::vector<double>& levels) {
  std::vector<ContourLevel> out;
  for (double level : levels) {
    ContourLevel cl{level, {}};
    const std::vector<Segment> segs = march(surface, level);
    std::unordered_multimap<std::size_t, std::size_t> at;  // edge -> segment
    for (std::size_t s = 0; s < segs.size(); ++s) {
      at.emplace(segs[s].a, s);
      at.emplace(segs[s].b, s);
    }
    std::vector<char> used(segs.size(), 0);
    const auto next_segment = [&](std::size_t edge) -> std::optional<std::size_t> {
      auto [lo, hi] = at.equal_range(edge);
      for (auto it = lo; it != hi; ++it) {
        if (!used[it->second]) return it->second;
      }
      return std::nullopt;
    };
    // Extend a chain from its tail edge until no unused neighbour remains.
    const auto extend = [&](std::vector<std::size_t>& chain) {
      while (auto s = next_segment(chain.back())) {
        used[*s] = 1;
        chain.push_back(segs[*s].a == chain.back() ? segs[*s].b : segs[*s].a);
      }
    };
    for (std::size_t s = 0; s < segs.size(); ++s) {
      if (used[s]) continue;
      used[s] = 1;
      std::vector<std::size_t> fwd{segs[s].a, segs[s].b};
      extend(fwd);
      std::vector<std::size_t> back{segs[s].a};
      extend(back);
      std::vector<std::size_t> chain(back.rbegin(), back.rend());
      chain.insert(chain.end(), fwd.begin() + 1, fwd.end());
      Polyline line;
      for (auto e : chain) line.push_back(edge_point(surface, e, level));
      cl.lines.push_back(std::move(line));
    }
    out.push_back(std::move(cl));
  }
  return out;
}

}  // namespace arcd
