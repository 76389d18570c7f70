#include <cmath>

#include "doctest.h"

#include "arcd/bayes_region.hpp"
#include "arcd/cd_estimation.hpp"
#include "arcd/errors.hpp"
#include "arcd/io.hpp"
#include "arcd/wald_region.hpp"

using namespace arcd;

TEST_CASE("constant likelihood gives a uniform posterior on the triangle") {
  const SeriesSample one{{1.0}};
  const SufficientStats st = sufficient_stats(one.view(), 2);
  const ParamGrid2D g(-2, 2, -1, 1, 40);
  const ConfidenceSurface post = flat_prior_posterior(st, 1.0, g);
  std::size_t inside = 0;
  for (std::size_t k = 0; k < g.size(); ++k) inside += g.in_region(k) ? 1 : 0;
  const double triangle_area = static_cast<double>(inside) * g.cell_area();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.in_region(k)) {
      CHECK(post.values[k] * g.cell_area() == doctest::Approx(g.cell_area() / triangle_area));
    } else {
      CHECK(post.values[k] == 0.0);
    }
  }
  CHECK(positive_mass(post) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("posterior mode sits at the estimate") {
  const SeriesSample s = simulate(ARParams{Eigen::Vector2d(0.3, 0.1), 1.0}, 200, 6);
  const FitResult f = fit_ar(s, 2);
  const ParamGrid2D g = default_window(f, 80);
  const ConfidenceSurface post = flat_prior_posterior(s, g);
  const auto mode = static_cast<std::size_t>(std::max_element(post.values.begin(), post.values.end()) - post.values.begin());
  CHECK(mode == *g.nearest(Eigen::Vector2d(f.phi_hat[0], f.phi_hat[1])));
  CHECK(post.kind == SurfaceKind::posterior);
  const RegionResult r = region_from_density(post, 0.95);
  CHECK(r.contains_node(mode));
}

TEST_CASE("posterior underflow is reported") {
  const SeriesSample s = simulate(ARParams{Eigen::Vector2d(0.3, 0.1), 1.0}, 200, 6);
  const ParamGrid2D far(1.5, 1.9, 0.5, 0.9, 10);  // outside the triangle
  CHECK_THROWS_AS(flat_prior_posterior(s, far), NoSolution);
}

TEST_CASE("spike correction arithmetic") {
  const ParamGrid2D g(0.0, 1.0, 0.0, 1.0, 10);
  // Put mass 0.2 (likelihood) and 0.1 (reference) in the band phi1 + phi2 >= 1.
  ConfidenceSurface lik{g, std::vector<double>(g.size(), 0.0), SurfaceKind::posterior, Method::bayes_flat};
  ConfidenceSurface ref{g, std::vector<double>(g.size(), 0.0), SurfaceKind::density, Method::cd_asymptotic};
  lik.values[g.index(0, 0)] = 0.8;
  lik.values[g.index(10, 10)] = 0.2;
  ref.values[g.index(0, 0)] = 0.9;
  ref.values[g.index(10, 10)] = 0.1;
  const SpikeCorrection c = spike_correction(lik, ref, 0.0);
  CHECK(c.k == doctest::Approx(0.2));
  CHECK(c.b == doctest::Approx(0.1));
  CHECK(c.a == doctest::Approx(1.125));
  CHECK(spike_correction(lik, lik, 0.0).a == doctest::Approx(1.0));

  ConfidenceSurface all = lik;
  all.values[g.index(0, 0)] = 0.0;
  CHECK_THROWS_AS(spike_correction(all, ref, 0.0), NoSolution);

  const auto j = io::spike_json(c);
  for (const char* key : {"b", "k", "a", "band"}) CHECK(j.contains(key));
}

TEST_CASE("corrected regions") {
  const SeriesSample s = simulate(ARParams{Eigen::Vector2d(0.5, 0.3), 1.0}, 60, 12);
  const FitResult f = fit_ar(s, 2);
  const ParamGrid2D g = default_window(f, 100);
  const ConfidenceSurface post = flat_prior_posterior(s, g);
  const RegionResult plain = region_from_density(post, 0.95);

  SUBCASE("a = 1 is the identity") {
    const RegionResult same = corrected_region(post, SpikeCorrection{0.1, 0.1, 1.0, 0.01}, 0.95);
    CHECK(same.member_nodes == plain.member_nodes);
  }
  SUBCASE("area shrinks as a grows and regions nest") {
    double prev = plain.area;
    for (double a : {1.05, 1.1}) {
      const RegionResult r = corrected_region(post, SpikeCorrection{0, 0, a, 0.01}, 0.95);
      CHECK(r.area < prev);
      for (auto k : r.member_nodes) CHECK(plain.contains_node(k));
      prev = r.area;
    }
  }
  SUBCASE("targets above 1 fail") {
    CHECK_THROWS_AS(corrected_region(post, SpikeCorrection{0, 0, 0.5, 0.01}, 0.95), NoSolution);
  }
  SUBCASE("fit overload computes masses on the whole window") {
    const SpikeCorrection c = spike_correction(f, g, default_boundary_band(g));
    CHECK(c.a > 0.0);
    CHECK(c.k >= 0.0);
    CHECK(c.k < 1.0);
    CHECK(c.band == doctest::Approx(std::hypot(g.h1(), g.h2())));
  }
}

TEST_CASE("lake-level series stays off the unit-root line") {
  const SeriesSample raw = io::read_series_csv(std::string(ARCD_FIXTURE_DIR) + "/lake_huron.csv", true);
  SeriesSample s = raw;
  double mean = 0.0;
  for (double v : s.values) mean += v;
  mean /= static_cast<double>(s.size());
  for (auto& v : s.values) v -= mean;
  const FitResult f = fit_ar(s, 2);
  const ParamGrid2D g = default_window(f, 100);
  const double band = default_boundary_band(g);
  const RegionResult r = region_from_density(flat_prior_posterior(s, g), 0.95);
  CHECK_FALSE(touches_boundary_band(r, band));
  const SpikeCorrection c = spike_correction(f, g, band);
  CHECK(c.b < 0.01);
  CHECK(c.k < 0.01);
}
