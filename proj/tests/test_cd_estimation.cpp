#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"

#include "arcd/cd_estimation.hpp"
#include "arcd/errors.hpp"
#include "arcd/stats.hpp"
#include "arcd/wald_region.hpp"

using namespace arcd;

namespace {

CdfGridEstimate synthetic_cdf(const ProbitQuadFit& truth, const ParamGrid2D& g) {
  CdfGridEstimate e{g, std::vector<double>(g.size(), std::nan("")), 1000, Eigen::Vector2d::Zero()};
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.in_region(k)) continue;
    const Eigen::Vector2d p = g.point(k);
    e.cdf[k] = normal_cdf(truth.z(p[0], p[1]));
  }
  return e;
}

double tiny_delta(std::size_t, double, double) { return 1e-9; }

}  // namespace

TEST_CASE("asymptotic confidence density") {
  const CovMatrix id{Eigen::Matrix2d::Identity(), std::nullopt};
  CHECK(cd_asymptotic_density(Eigen::Vector2d(0.1, 0.1), Eigen::Vector2d(0.2, 0.2), id, 100) ==
        doctest::Approx(100.0 / (2 * std::numbers::pi) * std::exp(-1.0)));
  CHECK(cd_asymptotic_density(Eigen::Vector2d(0.1, 0.1), Eigen::Vector2d(0.2, 0.2), id, 100) ==
        doctest::Approx(5.855).epsilon(1e-3));

  const CovMatrix om = omega_p2(Eigen::Vector2d(0.4, 0.2));
  const Eigen::Vector2d obs(0.4, 0.2);
  const double mode = cd_asymptotic_density(obs, obs, om, 100);
  CHECK(mode == doctest::Approx(100.0 / (2 * std::numbers::pi * std::sqrt(om.omega.determinant()))));
  for (double d : {0.01, 0.05, 0.1}) {
    CHECK(cd_asymptotic_density(obs + Eigen::Vector2d(d, -d), obs, om, 100) < mode);
  }
  CHECK(std::isfinite(log_cd_asymptotic_density(Eigen::Vector2d(-1.5, 0.9), obs, om, 100000)));
  CHECK_THROWS_AS(cd_asymptotic_density(obs, obs, CovMatrix{Eigen::Matrix2d::Ones(), std::nullopt}, 10),
                  SingularMatrix);

  SUBCASE("Riemann sum over a wide window is 1") {
    const ParamGrid2D g(-0.4, 1.2, -0.6, 1.0, 200);
    double mass = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) mass += cd_asymptotic_density(g.point(k), obs, om, 100);
    CHECK(mass * g.cell_area() == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("asymptotic density region matches the Wald ellipse") {
  const SeriesSample s = simulate(ARParams{Eigen::Vector2d(0.2, 0.1), 1.0}, 400, 13);
  const FitResult f = fit_ar(s, 2);
  const ParamGrid2D g = default_window(f, 200);
  const ConfidenceSurface d = normalize_density(asymptotic_density_surface(f, g));
  const RegionResult rd = region_from_density(d, 0.95);
  const RegionResult rw = region_from_curve(confidence_curve(f, g, Method::wald_asymptotic), 0.95);
  CHECK(symmetric_difference_area(rd, rw) <= 0.005 * union_area(rd, rw));
  CHECK(connected_components(rd) == 1);
  CHECK(positive_mass(d) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("delta rule") {
  CHECK(default_delta(100, 0.0, 0.0) == doctest::Approx(std::exp(6.04 - 2.64 * std::log(100.0))));
  CHECK(default_delta(100, 0.0, 0.0) == doctest::Approx(0.00220).epsilon(0.01));
  CHECK(default_delta(50, 0.5, 0.4) == 0.1);
  CHECK(default_delta(1'000'000, -1.0, -0.9) == 1e-6);
}

TEST_CASE("probit-quadratic regression") {
  const ProbitQuadFit truth{0.3, -1.2, 0.8, 0.5, -0.4, 1.1, 0, 0};
  const ParamGrid2D g(-0.5, 0.5, -0.5, 0.5, 12);
  CdfGridEstimate e = synthetic_cdf(truth, g);

  SUBCASE("noise-free values are recovered") {
    const ProbitQuadFit f = fit_probit_quadratic(e, 100, tiny_delta);
    CHECK(std::abs(f.c0 - truth.c0) < 1e-8);
    CHECK(std::abs(f.c1 - truth.c1) < 1e-8);
    CHECK(std::abs(f.c2 - truth.c2) < 1e-8);
    CHECK(std::abs(f.c11 - truth.c11) < 1e-8);
    CHECK(std::abs(f.c22 - truth.c22) < 1e-8);
    CHECK(std::abs(f.c12 - truth.c12) < 1e-8);
    CHECK(f.delta == 1e-9);
  }
  SUBCASE("values of exactly 0 or 1 are excluded") {
    const std::size_t before = fit_probit_quadratic(e, 100, tiny_delta).n_used;
    e.cdf[g.index(3, 3)] = 0.0;
    e.cdf[g.index(4, 3)] = 1.0;
    const auto zero_delta = [](std::size_t, double, double) { return 0.0; };
    const ProbitQuadFit f = fit_probit_quadratic(e, 100, zero_delta);
    CHECK(f.n_used == before - 2);
    CHECK(std::isfinite(f.c12));
  }
  SUBCASE("matches an independent least squares on shuffled rows") {
    Rng rng(5);
    for (auto& c : e.cdf) {
      if (std::isfinite(c)) c = std::clamp(c + 0.02 * (rng.uniform() - 0.5), 0.001, 0.999);
    }
    std::vector<std::array<double, 3>> rows;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!std::isfinite(e.cdf[k])) continue;
      const Eigen::Vector2d p = g.point(k);
      if (!(e.cdf[k] > 1e-9 && e.cdf[k] < 1 - 1e-9)) continue;
      rows.push_back({p[0], p[1], normal_quantile(e.cdf[k])});
    }
    std::shuffle(rows.begin(), rows.end(), rng.engine());
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), 6);
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto [a, b, z] = rows[r];
      x.row(static_cast<Eigen::Index>(r)) << 1, a, b, a * a, b * b, a * b;
      y[static_cast<Eigen::Index>(r)] = z;
    }
    const Eigen::VectorXd oracle = (x.transpose() * x).ldlt().solve(x.transpose() * y);
    const ProbitQuadFit f = fit_probit_quadratic(e, 100, tiny_delta);
    CHECK(f.c12 == doctest::Approx(oracle[5]).epsilon(1e-8));
    CHECK(f.c0 == doctest::Approx(oracle[0]).epsilon(1e-8));
    CHECK(f.n_used == rows.size());
  }
  SUBCASE("too few usable nodes") {
    CdfGridEstimate few{g, std::vector<double>(g.size(), 0.0), 100, Eigen::Vector2d::Zero()};
    for (int i = 0; i < 5; ++i) few.cdf[g.index(static_cast<std::size_t>(i), 0)] = 0.5;
    try {
      fit_probit_quadratic(few, 100);
      FAIL("expected an error");
    } catch (const InvalidParameter& err) {
      CHECK(std::string(err.what()).find("5 usable") != std::string::npos);
    }
  }
}

TEST_CASE("mixed-derivative density") {
  ProbitQuadFit only12{};
  only12.c12 = 1.0;
  CHECK(cd_bootstrap_density(only12, Eigen::Vector2d(0, 0)) == doctest::Approx(0.39894).epsilon(1e-5));

  // z depends on phi1 alone, so the mixed derivative vanishes
  ProbitQuadFit flat{0.2, 0.0, 0.0, 0.7, 0.0, 0.0, 0, 0};
  for (double a : {-0.3, 0.0, 0.4}) CHECK(cd_bootstrap_density(flat, Eigen::Vector2d(a, 0.2)) == 0.0);

  Rng rng(2024);
  for (int rep = 0; rep < 100; ++rep) {
    ProbitQuadFit f{rng.uniform() - 0.5, 2 * rng.uniform() - 1, 2 * rng.uniform() - 1, rng.uniform() - 0.5,
                    rng.uniform() - 0.5, 2 * rng.uniform() - 1, 0, 0};
    const Eigen::Vector2d p(rng.uniform() - 0.5, rng.uniform() - 0.5);
    const double h = 1e-4;
    const auto cdf = [&](double a, double b) { return normal_cdf(f.z(a, b)); };
    const double fd = (cdf(p[0] + h, p[1] + h) - cdf(p[0] + h, p[1] - h) - cdf(p[0] - h, p[1] + h) +
                       cdf(p[0] - h, p[1] - h)) / (4 * h * h);
    const double an = cd_bootstrap_density(f, p);
    CHECK(std::abs(an - fd) <= 1e-6 * std::max(1.0, std::abs(an)) + 1e-7);
  }
}

TEST_CASE("Monte Carlo orthant CDF") {
  const Eigen::Vector2d obs(0.0, 0.0);
  const ParamGrid2D g(-0.4, 0.4, -0.4, 0.4, 8);
  const std::size_t nmc = 2000;
  const CdfGridEstimate e = estimate_cdf_grid(g, obs, 100, 1.0, nmc, 77);

  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.in_region(k)) {
      CHECK(std::isnan(e.cdf[k]));
      continue;
    }
    CHECK(e.cdf[k] >= 0.0);
    CHECK(e.cdf[k] <= 1.0);
    const double scaled = e.cdf[k] * static_cast<double>(nmc);
    CHECK(scaled == doctest::Approx(std::round(scaled)));
  }
  CHECK(e.cdf[g.index(0, 0)] < 0.01);  // far below the estimate
  CHECK(e.cdf[g.index(8, 8)] > 0.99);  // far above
  CHECK(std::abs(e.cdf[*g.nearest(obs)] - 0.25) < 0.1);

  const double tol = 3.0 / std::sqrt(static_cast<double>(nmc));
  for (std::size_t j = 0; j <= 8; ++j) {
    for (std::size_t i = 0; i < 8; ++i) {
      const double a = e.cdf[g.index(i, j)], b = e.cdf[g.index(i + 1, j)];
      if (std::isfinite(a) && std::isfinite(b)) CHECK(b >= a - tol);
      const double c = e.cdf[g.index(j, i)], d = e.cdf[g.index(j, i + 1)];
      if (std::isfinite(c) && std::isfinite(d)) CHECK(d >= c - tol);
    }
  }

  SUBCASE("invariant to the innovation scale") {
    CHECK(estimate_cdf_grid(g, obs, 100, 4.0, 300, 5).cdf == estimate_cdf_grid(g, obs, 100, 1.0, 300, 5).cdf);
  }
  SUBCASE("serial and parallel agree") {
    CHECK(estimate_cdf_grid(g, obs, 60, 1.0, 200, 9, Exec::serial).cdf ==
          estimate_cdf_grid(g, obs, 60, 1.0, 200, 9, Exec::parallel).cdf);
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(estimate_cdf_grid(g, obs, 100, 1.0, 0, 1), InvalidParameter);
    CHECK_THROWS_AS(estimate_cdf_grid(g, obs, 100, -1.0, 10, 1), InvalidParameter);
  }
}

TEST_CASE("bootstrap density surface from simulated data") {
  const SeriesSample s = simulate(ARParams{Eigen::Vector2d(0.4, 0.2), 1.0}, 100, 31);
  const FitResult f = fit_ar(s, 2);
  const ParamGrid2D fine = default_window(f, 60);
  const ParamGrid2D coarse(fine.phi1_min(), fine.phi1_max(), fine.phi2_min(), fine.phi2_max(), 20);
  const CdfGridEstimate e =
      estimate_cdf_grid(coarse, Eigen::Vector2d(f.phi_hat[0], f.phi_hat[1]), f.n, 1.0, 400, 3);
  const ProbitQuadFit pq = fit_probit_quadratic(e, f.n);
  CHECK(pq.n_used >= 6);
  CHECK(pq.delta > 0.0);
  const ConfidenceSurface d = normalize_density(bootstrap_density_surface(pq, fine));
  CHECK(positive_mass(d) == doctest::Approx(1.0).epsilon(1e-6));
  const RegionResult r = region_from_density(d, 0.9);
  CHECK(r.area > 0.0);
  CHECK(r.contains(Eigen::Vector2d(f.phi_hat[0], f.phi_hat[1])));
}
