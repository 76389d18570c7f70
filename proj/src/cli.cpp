#include "arcd/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "arcd/bayes_region.hpp"
#include "arcd/errors.hpp"
#include "arcd/experiments.hpp"
#include "arcd/implied_prior.hpp"
#include "arcd/io.hpp"
#include "arcd/parallel.hpp"
#include "arcd/wald_region.hpp"

namespace arcd::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const auto kLevelCheck = CLI::Validator(
    [](std::string& s) -> std::string {
      try {
        const double v = std::stod(s);
        if (v > 0.0 && v < 1.0) return {};
      } catch (const std::exception&) {
      }
      return "level must lie strictly between 0 and 1, got " + s;
    },
    "LEVEL in (0,1)");

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& err) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  err << "seed: " << s << '\n';
  return s;
}

Eigen::Vector2d as_pair(const std::vector<double>& v, const std::string& flag) {
  if (v.size() != 2) throw UsageError(flag + " needs exactly two comma-separated values");
  return {v[0], v[1]};
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw UsageError("cannot write " + p.string());
  return f;
}

void write_json(const fs::path& p, const json& j) { open_out(p) << j.dump(2) << '\n'; }

void write_surface(const fs::path& p, const ConfidenceSurface& s) {
  auto f = open_out(p);
  io::write_surface_csv(f, s);
}

std::string fmt_vec(const Eigen::VectorXd& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + io::fmt(v[i]);
  return s + ")";
}

// Series preprocessing shared by fit and analyze.
struct SeriesFlags {
  std::string input;
  bool header = false;
  std::string transform = "none";
  double shift = 0.1;
  bool demean = false;
  std::size_t order = 2;
};

void add_series_flags(CLI::App* app, SeriesFlags& f, bool input_required) {
  auto* in = app->add_option("--input", f.input, "single-column series CSV");
  if (input_required) in->required();
  app->add_flag("--header", f.header, "the CSV has a header line");
  app->add_option("--transform", f.transform, "none or logshift: z = log(y - min y + shift)")
      ->check(CLI::IsMember({"none", "logshift"}));
  app->add_option("--shift", f.shift, "constant of the logshift transform")->check(CLI::PositiveNumber);
  app->add_flag("--demean", f.demean, "subtract the sample mean");
  app->add_option("--order", f.order, "AR order")->check(CLI::PositiveNumber);
}

SeriesSample prepare(SeriesSample s, const SeriesFlags& f) {
  if (s.values.empty()) throw InvalidParameter("series is empty");
  if (f.transform == "logshift") {
    const double lo = *std::min_element(s.values.begin(), s.values.end());
    for (auto& v : s.values) v = std::log(v - lo + f.shift);
  }
  if (f.demean) {
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= static_cast<double>(s.size());
    for (auto& v : s.values) v -= mean;
  }
  return s;
}

json fit_json(const FitResult& fit) {
  const CovMatrix om = omega_hat(fit.phi_hat);
  const Eigen::VectorXd se = standard_errors(om, fit.n);
  json j{{"n", fit.n}, {"order", fit.order()}, {"sigma2_hat", std::stod(io::fmt(fit.sigma2_hat))}};
  for (Eigen::Index i = 0; i < fit.phi_hat.size(); ++i) {
    j["phi_hat"].push_back(std::stod(io::fmt(fit.phi_hat[i])));
    j["se"].push_back(std::stod(io::fmt(se[i])));
  }
  if (om.warning) j["warning"] = *om.warning;
  return j;
}

struct GridFlags {
  std::size_t m = 100;
  double se_multiple = 5.0;
};

void add_method_flags(CLI::App* app, MethodOptions& o, GridFlags& g) {
  app->add_option("--replicates,--n-bootstrap", o.n_bootstrap, "Wald bootstrap replicates")
      ->check(CLI::PositiveNumber);
  app->add_option("--n-mc", o.n_mc, "orthant-CDF replicates per grid node")->check(CLI::PositiveNumber);
  app->add_option("--m-cdf", o.m_cdf, "subdivisions of the CDF grid")->check(CLI::Range(2, 1000));
  app->add_option("--m", g.m, "grid subdivisions per axis")->check(CLI::Range(2, 5000));
  app->add_option("--se-multiple", g.se_multiple, "window half-width in standard errors")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confidence distributions, regions and implied priors for AR(p) coefficients", "arcd"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
  std::optional<std::uint64_t> seed;

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate one AR(p) series");
  std::vector<double> sim_phi;
  std::size_t sim_n = 0;
  double sim_sigma2 = 1.0;
  std::string sim_out;
  sim->add_option("--phi", sim_phi, "coefficients, comma-separated")->required()->delimiter(',');
  sim->add_option("--n", sim_n, "series length")->required()->check(CLI::PositiveNumber);
  sim->add_option("--sigma2", sim_sigma2, "innovation variance")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "root seed");
  sim->add_option("--out", sim_out, "series CSV (default: stdout); the config goes to <out>.json");

  // fit
  auto* fitc = app.add_subcommand("fit", "least squares fit of an AR(p) model");
  SeriesFlags fit_flags;
  add_series_flags(fitc, fit_flags, true);

  // region
  auto* reg = app.add_subcommand("region", "confidence surface and region for one method");
  SeriesFlags reg_flags;
  add_series_flags(reg, reg_flags, false);
  bool reg_simulate = false;
  std::vector<double> reg_phi{0.0, 0.0};
  std::size_t reg_n = 100;
  std::string reg_method;
  double reg_level = 0.95;
  std::vector<double> reg_truth;
  std::string reg_dir = ".";
  MethodOptions reg_opts;
  GridFlags reg_grid;
  reg->add_flag("--simulate", reg_simulate, "simulate the input series from --phi and --n");
  reg->add_option("--phi", reg_phi, "coefficients for --simulate")->delimiter(',');
  reg->add_option("--n", reg_n, "series length for --simulate")->check(CLI::PositiveNumber);
  reg->add_option("--method", reg_method, "wald_asymptotic, wald_bootstrap, cd_asymptotic, cd_bootstrap or bayes_flat")
      ->required()
      ->check(CLI::IsMember({"wald_asymptotic", "wald_bootstrap", "cd_asymptotic", "cd_bootstrap", "bayes_flat"}));
  reg->add_option("--level", reg_level, "confidence level 1 - alpha")->check(kLevelCheck);
  reg->add_option("--truth", reg_truth, "report whether this point is covered")->delimiter(',');
  reg->add_option("--out-dir", reg_dir, "directory for surface.csv and region.json");
  reg->add_option("--seed", seed, "root seed");
  add_method_flags(reg, reg_opts, reg_grid);

  // analyze
  auto* ana = app.add_subcommand("analyze", "fit an empirical series and build every region");
  SeriesFlags ana_flags;
  add_series_flags(ana, ana_flags, true);
  double ana_level = 0.95;
  std::string ana_dir = ".";
  MethodOptions ana_opts;
  GridFlags ana_grid;
  ana->add_option("--level", ana_level, "confidence level 1 - alpha")->check(kLevelCheck);
  ana->add_option("--out-dir", ana_dir, "output directory");
  ana->add_option("--seed", seed, "root seed");
  add_method_flags(ana, ana_opts, ana_grid);

  // coverage
  auto* cov = app.add_subcommand("coverage", "coverage and mean area study");
  std::string cov_config, cov_out;
  std::vector<double> cov_phi0, cov_levels;
  std::vector<std::size_t> cov_n;
  std::vector<std::string> cov_methods;
  std::optional<std::size_t> cov_reps, cov_nb, cov_nmc, cov_m, cov_mcdf;
  cov->add_option("--config", cov_config, "JSON config; flags override it")->check(CLI::ExistingFile);
  cov->add_option("--phi0", cov_phi0, "true coefficients")->delimiter(',');
  cov->add_option("--n", cov_n, "sample sizes")->delimiter(',');
  cov->add_option("--levels,--level", cov_levels, "confidence levels")->delimiter(',')->check(kLevelCheck);
  cov->add_option("--methods,--method", cov_methods, "methods")
      ->delimiter(',')
      ->check(CLI::IsMember({"wald_asymptotic", "wald_bootstrap", "cd_asymptotic", "cd_bootstrap"}));
  cov->add_option("--replicates,--reps", cov_reps, "replicates per sample size")->check(CLI::PositiveNumber);
  cov->add_option("--n-bootstrap", cov_nb, "Wald bootstrap replicates")->check(CLI::PositiveNumber);
  cov->add_option("--n-mc", cov_nmc, "orthant-CDF replicates per node")->check(CLI::PositiveNumber);
  cov->add_option("--m", cov_m, "grid subdivisions")->check(CLI::Range(2, 5000));
  cov->add_option("--m-cdf", cov_mcdf, "CDF grid subdivisions")->check(CLI::Range(2, 1000));
  cov->add_option("--seed", seed, "root seed");
  cov->add_option("--out", cov_out, "results CSV (default: stdout)");

  // implied-prior
  auto* ip = app.add_subcommand("implied-prior", "mean log implied prior residual surface");
  std::vector<double> ip_phi0;
  std::size_t ip_n = 0, ip_reps = 0, ip_m = 40;
  double ip_sigma2 = 1.0, ip_half = 0.5;
  bool ip_ml = false;
  std::vector<double> ip_levels;
  std::string ip_dir = ".";
  ip->add_option("--phi0", ip_phi0, "true coefficients")->required()->delimiter(',');
  ip->add_option("--n", ip_n, "series length")->required()->check(CLI::Range(3ul, 100000000ul));
  ip->add_option("--reps,--replicates", ip_reps, "replications")->required()->check(CLI::PositiveNumber);
  ip->add_option("--m", ip_m, "grid subdivisions")->check(CLI::Range(2, 5000));
  ip->add_option("--half-width", ip_half, "window is phi0 +- half-width per axis")->check(CLI::PositiveNumber);
  ip->add_option("--sigma2", ip_sigma2, "innovation variance")->check(CLI::PositiveNumber);
  ip->add_flag("--ml-sigma2", ip_ml, "use the ML variance in the likelihood");
  ip->add_option("--contour-levels", ip_levels, "iso-levels for contours.json")->delimiter(',');
  ip->add_option("--out-dir", ip_dir, "output directory");
  ip->add_option("--seed", seed, "root seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    set_threads(threads);

    if (*sim) {
      ARParams params{Eigen::Map<const Eigen::VectorXd>(sim_phi.data(), static_cast<Eigen::Index>(sim_phi.size())),
                      sim_sigma2};
      if (sim_phi.empty()) throw UsageError("--phi needs at least one coefficient");
      if (!is_causal(params.phi)) err << "warning: non-causal parameters; the series may explode\n";
      const std::uint64_t s = resolve_seed(seed, err);
      const SeriesSample series = simulate(params, sim_n, s);
      json cfg{{"command", "simulate"}, {"phi", sim_phi}, {"n", sim_n}, {"sigma2", sim_sigma2}, {"seed", s}};
      if (sim_out.empty()) {
        io::write_series_csv(out, series);
        err << cfg.dump() << '\n';
      } else {
        auto f = open_out(sim_out);
        io::write_series_csv(f, series);
        write_json(sim_out + ".json", cfg);
      }
      return kOk;
    }

    if (*fitc) {
      const SeriesSample s = prepare(io::read_series_csv(fit_flags.input, fit_flags.header), fit_flags);
      out << fit_json(fit_ar(s, fit_flags.order)).dump(2) << '\n';
      return kOk;
    }

    if (*reg) {
      const std::uint64_t s = resolve_seed(seed, err);
      SeriesSample series;
      if (reg_simulate) {
        series = simulate(ARParams{Eigen::VectorXd(as_pair(reg_phi, "--phi")), 1.0}, reg_n, derive_seed(s, 0));
      } else if (!reg_flags.input.empty()) {
        series = prepare(io::read_series_csv(reg_flags.input, reg_flags.header), reg_flags);
      } else {
        throw UsageError("region needs --input or --simulate");
      }
      if (reg_flags.order != 2) throw UsageError("regions are two-dimensional; --order must be 2");
      const FitResult fit = fit_ar(series, 2);
      const ParamGrid2D grid = default_window(fit, reg_grid.m, reg_grid.se_multiple);
      const Method method = parse_method(reg_method);
      const ConfidenceSurface surface = build_surface(method, series, fit, grid, reg_opts, s);
      const RegionResult region = region_at(surface, reg_level);
      json rj = io::region_json(region);
      rj["method"] = std::string(to_string(method));
      write_surface(fs::path(reg_dir) / "surface.csv", surface);
      write_json(fs::path(reg_dir) / "region.json", rj);
      out << "method " << to_string(method) << "  level " << io::fmt(reg_level) << "  area " << io::fmt(region.area)
          << '\n';
      if (region.warning) err << "warning: " << *region.warning << '\n';
      if (!reg_truth.empty()) {
        const Eigen::Vector2d t = as_pair(reg_truth, "--truth");
        out << "truth " << fmt_vec(t) << (region.contains(t) ? " covered" : " not covered") << '\n';
      }
      return kOk;
    }

    if (*ana) {
      const std::uint64_t s = resolve_seed(seed, err);
      const SeriesSample series = prepare(io::read_series_csv(ana_flags.input, ana_flags.header), ana_flags);
      const FitResult fit = fit_ar(series, ana_flags.order);
      json report = fit_json(fit);
      out << "n " << fit.n << "  phi_hat " << fmt_vec(fit.phi_hat) << "  se "
          << fmt_vec(standard_errors(omega_hat(fit.phi_hat), fit.n)) << "  sigma2_hat " << io::fmt(fit.sigma2_hat)
          << '\n';
      const fs::path dir(ana_dir);
      if (fit.order() == 2) {
        const ParamGrid2D grid = default_window(fit, ana_grid.m, ana_grid.se_multiple);
        const double band = default_boundary_band(grid);
        for (Method m : {Method::wald_asymptotic, Method::wald_bootstrap, Method::cd_asymptotic,
                         Method::cd_bootstrap, Method::bayes_flat}) {
          const std::string name(to_string(m));
          try {
            const ConfidenceSurface surface = build_surface(m, series, fit, grid, ana_opts, s);
            const RegionResult region = region_at(surface, ana_level);
            json rj = io::region_json(region);
            rj["method"] = name;
            rj["touches_boundary_band"] = touches_boundary_band(region, band);
            write_surface(dir / (name + "_surface.csv"), surface);
            write_json(dir / (name + "_region.json"), rj);
            report["regions"][name] = {{"area", std::stod(io::fmt(region.area))},
                                       {"touches_boundary_band", touches_boundary_band(region, band)}};
            out << name << "  area " << io::fmt(region.area)
                << (touches_boundary_band(region, band) ? "  touches phi1+phi2=1" : "") << '\n';
            if (m == Method::bayes_flat && touches_boundary_band(region, band)) {
              const SpikeCorrection c = spike_correction(fit, grid, band);
              const RegionResult corrected = corrected_region(surface, c, ana_level);
              json cj = io::region_json(corrected);
              cj["method"] = "bayes_corrected";
              write_json(dir / "bayes_corrected_region.json", cj);
              write_json(dir / "spike.json", io::spike_json(c));
              report["spike"] = io::spike_json(c);
              report["regions"]["bayes_corrected"] = {{"area", std::stod(io::fmt(corrected.area))}};
              out << "bayes_corrected  a " << io::fmt(c.a) << "  area " << io::fmt(corrected.area) << '\n';
            }
          } catch (const Error& e) {
            report["regions"][name] = {{"error", e.what()}};
            err << name << ": " << e.what() << '\n';
          }
        }
      } else {
        err << "note: regions are built for order 2 only\n";
      }
      report["seed"] = s;
      write_json(dir / "report.json", report);
      return kOk;
    }

    if (*cov) {
      ExperimentConfig c;
      if (!cov_config.empty()) {
        std::ifstream f(cov_config);
        json j;
        try {
          j = json::parse(f);
        } catch (const json::exception& e) {
          throw UsageError(std::string("cannot parse config: ") + e.what());
        }
        c = io::config_from_json(j, c);
      }
      if (!cov_phi0.empty()) c.phi0 = as_pair(cov_phi0, "--phi0");
      if (!cov_n.empty()) c.n_values = cov_n;
      if (!cov_levels.empty()) c.levels = cov_levels;
      if (!cov_methods.empty()) {
        c.methods.clear();
        for (const auto& m : cov_methods) c.methods.push_back(parse_method(m));
      }
      if (cov_reps) c.replicates = *cov_reps;
      if (cov_nb) c.options.n_bootstrap = *cov_nb;
      if (cov_nmc) c.options.n_mc = *cov_nmc;
      if (cov_m) c.m = *cov_m;
      if (cov_mcdf) c.options.m_cdf = *cov_mcdf;
      if (seed || cov_config.empty()) c.root_seed = resolve_seed(seed, err);
      try {
        c.validate();
      } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
      }
      const auto rows = run_coverage_study(c);
      if (cov_out.empty()) {
        io::write_coverage_csv(out, rows);
      } else {
        auto f = open_out(cov_out);
        io::write_coverage_csv(f, rows);
      }
      for (const auto& r : rows) {
        if (r.aborted) err << "row n=" << r.n << " " << to_string(r.method) << " aborted: " << r.failures
                           << " failed replicates\n";
      }
      return kOk;
    }

    if (*ip) {
      const Eigen::Vector2d phi0 = as_pair(ip_phi0, "--phi0");
      if (!is_stationary_p2(phi0)) throw UsageError("--phi0 must lie inside the stationarity triangle");
      const std::uint64_t s = resolve_seed(seed, err);
      const ParamGrid2D grid(phi0[0] - ip_half, phi0[0] + ip_half, phi0[1] - ip_half, phi0[1] + ip_half, ip_m);
      const ImpliedPriorStudy st = run_implied_prior_study(phi0, ip_n, ip_reps, grid, s, ip_sigma2, ip_ml);
      const fs::path dir(ip_dir);
      write_surface(dir / "implied_prior_mean.csv", st.mean);
      write_surface(dir / "implied_prior_mean_abs.csv", st.mean_abs);
      std::vector<double> levels = ip_levels;
      if (levels.empty()) {
        double lo = 0.0, hi = 0.0;
        for (double v : st.mean.values) {
          if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
        }
        for (int i = 1; i <= 9; ++i) levels.push_back(lo + (hi - lo) * i / 10.0);
      }
      write_json(dir / "implied_prior_contours.json", io::contour_json(contour_lines(st.mean, levels)));
      double max_abs = 0.0;
      for (double v : st.mean.values) {
        if (std::isfinite(v)) max_abs = std::max(max_abs, std::abs(v));
      }
      out << "replications " << st.replications << "  failures " << st.failures << "  max |mean residual| "
          << io::fmt(max_abs) << '\n';
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsage;
}

}  // namespace arcd::cli
