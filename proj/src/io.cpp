#include "arcd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "arcd/errors.hpp"

namespace arcd::io {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, std::size_t line) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) {
    std::ostringstream msg;
    msg << "line " << line << ": cannot parse '" << t << "' as a number";
    throw InvalidParameter(msg.str());
  }
  return v;
}

double r6(double x) { return std::isfinite(x) ? std::stod(fmt(x)) : x; }

}  // namespace

SeriesSample read_series_csv(std::istream& in, bool header) {
  SeriesSample s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    const std::string t = trim(line);
    if (t.empty()) continue;
    s.values.push_back(parse_double(t.substr(0, t.find(',')), lineno));
  }
  return s;
}

SeriesSample read_series_csv(const std::string& path, bool header) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open series file " + path);
  return read_series_csv(in, header);
}

void write_series_csv(std::ostream& out, const SeriesSample& series, bool header) {
  if (header) out << "y\n";
  for (double v : series.values) out << fmt(v) << '\n';
}

void write_surface_csv(std::ostream& out, const ConfidenceSurface& surface) {
  out << "phi1,phi2,value,in_region\n";
  const ParamGrid2D& g = surface.grid;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Eigen::Vector2d p = g.point(k);
    out << fmt(p[0]) << ',' << fmt(p[1]) << ',' << fmt(surface.values[k]) << ',' << (g.in_region(k) ? 1 : 0)
        << '\n';
  }
}

std::vector<SurfaceRow> read_surface_csv(std::istream& in) {
  std::vector<SurfaceRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 4) throw InvalidParameter("surface CSV line " + std::to_string(lineno) + " needs 4 fields");
    rows.push_back({parse_double(f[0], lineno), parse_double(f[1], lineno), parse_double(f[2], lineno),
                    parse_double(f[3], lineno) != 0.0});
  }
  return rows;
}

nlohmann::json region_json(const RegionResult& region) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : region.cells()) cells.push_back({c[0], c[1]});
  nlohmann::json j{{"level", r6(region.level)}, {"threshold", r6(region.threshold)}, {"area", r6(region.area)},
                   {"cells", std::move(cells)}};
  if (region.warning) j["warning"] = *region.warning;
  return j;
}

nlohmann::json probit_fit_json(const ProbitQuadFit& f) {
  return {{"c0", r6(f.c0)},   {"c1", r6(f.c1)},   {"c2", r6(f.c2)},     {"c11", r6(f.c11)},
          {"c22", r6(f.c22)}, {"c12", r6(f.c12)}, {"n_used", f.n_used}, {"delta", r6(f.delta)}};
}

nlohmann::json spike_json(const SpikeCorrection& c) {
  return {{"b", r6(c.b)}, {"k", r6(c.k)}, {"a", r6(c.a)}, {"band", r6(c.band)}};
}

nlohmann::json contour_json(const std::vector<ContourLevel>& levels) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& cl : levels) {
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& line : cl.lines) {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& p : line) pts.push_back({r6(p[0]), r6(p[1])});
      lines.push_back(std::move(pts));
    }
    out.push_back({{"level", r6(cl.level)}, {"lines", std::move(lines)}});
  }
  return out;
}

void write_coverage_csv(std::ostream& out, const std::vector<CoverageRow>& rows) {
  out << "n,method,level,coverage,mc_se,mean_area,replicates,failures\n";
  for (const auto& r : rows) {
    out << r.n << ',' << to_string(r.method) << ',' << fmt(r.level) << ',' << fmt(r.coverage) << ','
        << fmt(r.mc_se) << ',' << fmt(r.mean_area) << ',' << r.replicates << ',' << r.failures << '\n';
  }
}

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig c) {
  try {
    if (j.contains("phi0")) {
      const auto v = j.at("phi0").get<std::vector<double>>();
      if (v.size() != 2) throw InvalidParameter("phi0 must have two entries");
      c.phi0 = Eigen::Vector2d(v[0], v[1]);
    }
    if (j.contains("sigma2")) c.sigma2 = j.at("sigma2").get<double>();
    if (j.contains("n_values")) c.n_values = j.at("n_values").get<std::vector<std::size_t>>();
    if (j.contains("levels")) c.levels = j.at("levels").get<std::vector<double>>();
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("replicates")) c.replicates = j.at("replicates").get<std::size_t>();
    if (j.contains("n_bootstrap")) c.options.n_bootstrap = j.at("n_bootstrap").get<std::size_t>();
    if (j.contains("n_mc")) c.options.n_mc = j.at("n_mc").get<std::size_t>();
    if (j.contains("m")) c.m = j.at("m").get<std::size_t>();
    if (j.contains("m_cdf")) c.options.m_cdf = j.at("m_cdf").get<std::size_t>();
    if (j.contains("se_multiple")) c.se_multiple = j.at("se_multiple").get<double>();
    if (j.contains("seed")) c.root_seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("bad config: ") + e.what());
  }
  return c;
}

}  // namespace arcd::io
