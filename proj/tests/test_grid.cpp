#include <cmath>

#include "doctest.h"

#include "arcd/errors.hpp"
#include "arcd/grid.hpp"

using namespace arcd;

namespace {

ConfidenceSurface gaussian_bump(const ParamGrid2D& g, double sd) {
  ConfidenceSurface s{g, std::vector<double>(g.size()), SurfaceKind::density, Method::cd_asymptotic};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Eigen::Vector2d p = g.point(k);
    s.values[k] = std::exp(-0.5 * p.squaredNorm() / (sd * sd));
  }
  return s;
}

}  // namespace

TEST_CASE("grid geometry") {
  const ParamGrid2D g(-1.0, 1.0, -0.5, 0.5, 4);
  CHECK(g.size() == 25);
  CHECK(g.h1() == doctest::Approx(0.5));
  CHECK(g.h2() == doctest::Approx(0.25));
  CHECK(g.cell_area() == doctest::Approx(0.125));
  CHECK(g.point(g.index(2, 3))[0] == doctest::Approx(0.0));
  CHECK(g.point(g.index(2, 3))[1] == doctest::Approx(0.25));
  CHECK(g.in_region(g.index(2, 2)));
  CHECK(g.nearest(Eigen::Vector2d(0.1, 0.1)) == g.index(2, 2));
  CHECK_FALSE(g.nearest(Eigen::Vector2d(3.0, 0.0)).has_value());
  for (const auto& n : g.nodes()) CHECK(n.in_region == (n.phi1 + n.phi2 < 1 && n.phi2 - n.phi1 < 1 && n.phi2 > -1));
}

TEST_CASE("window around a center is clipped to the bounding box") {
  const ParamGrid2D g = ParamGrid2D::around(Eigen::Vector2d(1.8, 0.9), Eigen::Vector2d(0.5, 0.5), 10);
  CHECK(g.phi1_max() == doctest::Approx(2.0));
  CHECK(g.phi2_max() == doctest::Approx(1.0));
  CHECK(g.phi1_min() == doctest::Approx(1.3));
}

TEST_CASE("methods round-trip through their names") {
  for (Method m : {Method::wald_asymptotic, Method::wald_bootstrap, Method::cd_asymptotic, Method::cd_bootstrap,
                   Method::bayes_flat, Method::bayes_corrected}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("nope"), InvalidParameter);
}

TEST_CASE("density regions") {
  const ParamGrid2D g(-0.6, 0.6, -0.6, 0.6, 120);
  const ConfidenceSurface s = normalize_density(gaussian_bump(g, 0.1));
  CHECK(positive_mass(s) == doctest::Approx(1.0).epsilon(1e-9));

  SUBCASE("mass of the region meets the target") {
    const RegionResult r = region_from_density(s, 0.9);
    double mass = 0.0;
    for (auto k : r.member_nodes) mass += s.values[k] * g.cell_area();
    CHECK(mass >= 0.9);
    CHECK(mass < 0.9 + 0.01);
    // Gaussian disc of radius sqrt(chi2_2(0.9)) sd
    CHECK(r.area == doctest::Approx(M_PI * 0.01 * -2 * std::log(0.1)).epsilon(0.03));
    CHECK(connected_components(r) == 1);
  }
  SUBCASE("nesting in the level") {
    double prev = 0.0;
    RegionResult lower = region_from_density(s, 0.5);
    for (double level : {0.6, 0.7, 0.8, 0.9, 0.95, 0.99}) {
      const RegionResult r = region_from_density(s, level);
      CHECK(r.area >= prev);
      for (auto k : lower.member_nodes) CHECK(r.contains_node(k));
      prev = r.area;
      lower = r;
    }
  }
  SUBCASE("level close to 1 takes every positive cell") {
    const ParamGrid2D g60(-0.6, 0.6, -0.6, 0.6, 60);
    const ConfidenceSurface t = normalize_density(gaussian_bump(g60, 0.3));
    const RegionResult r = region_from_density_mass(t, positive_mass(t), 0.999999);
    std::size_t positive = 0;
    for (std::size_t k = 0; k < g60.size(); ++k) positive += (t.values[k] > 0 && g60.in_region(k)) ? 1 : 0;
    CHECK(r.member_nodes.size() == positive);
  }
  SUBCASE("targets above the mass have no solution") {
    CHECK_THROWS_AS(region_from_density_mass(s, 1.5, 0.9), NoSolution);
    CHECK_THROWS_AS(region_from_density(s, 1.0), InvalidParameter);
  }
  SUBCASE("negative values carry no mass") {
    ConfidenceSurface t = gaussian_bump(g, 0.1);
    t.values[0] = -5.0;
    const ConfidenceSurface n = normalize_density(t);
    CHECK(positive_mass(n) == doctest::Approx(1.0));
    CHECK(n.values[0] < 0.0);
    CHECK_FALSE(region_from_density(n, 0.95).contains_node(0));
  }
}

TEST_CASE("region set algebra and boundary") {
  const ParamGrid2D g(0.0, 1.0, 0.0, 1.0, 4);
  const RegionResult a = make_region(g, 0.9, 0.0, {g.index(0, 0), g.index(1, 0)});
  const RegionResult b = make_region(g, 0.9, 0.0, {g.index(1, 0), g.index(3, 3)});
  CHECK(symmetric_difference_area(a, b) == doctest::Approx(2 * g.cell_area()));
  CHECK(union_area(a, b) == doctest::Approx(3 * g.cell_area()));
  CHECK(connected_components(b) == 2);
  CHECK(region_boundary(a).size() == 6);
  CHECK(make_region(g, 0.5, 0.0, {}).warning.has_value());
  CHECK(a.cells()[1] == std::array<std::size_t, 2>{1, 0});
}
