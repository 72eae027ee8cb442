#include "fcs/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fcs/errors.hpp"

namespace fcs {

namespace {

using nlohmann::json;

json constraints_json(const ModelSpec& spec) {
  json c = json::object();
  switch (spec.family) {
    case Family::Ar1Gaussian:
      c["alpha1"] = "|alpha1| < 1";
      c["sigma2"] = "sigma2 > 0";
      break;
    case Family::LinearPsi:
      switch (spec.psi_family) {
        case PsiFamily::Ar1: c["ar"] = "|ar| < 1"; break;
        case PsiFamily::Arma11:
          c["ar"] = "|ar| < 1";
          c["ma"] = "|ma| < 1";
          break;
        case PsiFamily::Arfima: c["d"] = "-0.5 < d < 0.5"; break;
      }
      c["sigma2"] = "sigma2 > 0";
      break;
    case Family::SkewTAr1:
      c["alpha1"] = "|alpha1| < 1";
      c["v"] = "v > 2";
      c["lambda"] = "|lambda| < 1";
      break;
    case Family::Mixture:
      c["sigma2"] = "sigma2 > 0";
      c["p11"] = "0 < p11 < 1";
      c["p10"] = "0 < p10 < 1";
      break;
    case Family::HarM1:
    case Family::HarM2:
      c["alpha2"] = "|alpha2| < 1";
      c["sigmaV2"] = "sigmaV2 > 0";
      break;
  }
  return c;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw DataError("csv: bad numeric field '" + s + "'");
  return v;
}

}  // namespace

json model_to_json(const ModelSpec& spec, const ModelParams& params) {
  json doc;
  doc["family"] = family_name(spec);
  json p = json::object();
  switch (spec.family) {
    case Family::Ar1Gaussian: {
      const auto& m = std::get<Ar1GaussianParams>(params);
      p["alpha1"] = m.alpha1;
      p["sigma2"] = m.sigma2;
      break;
    }
    case Family::LinearPsi: {
      const auto& m = std::get<LinearPsiParams>(params);
      const auto names = param_names(spec);
      for (std::size_t k = 0; k < m.rho.size(); ++k) p[names[k]] = m.rho[k];
      p["sigma2"] = m.sigma2;
      break;
    }
    case Family::SkewTAr1: {
      const auto& m = std::get<SkewTAr1Params>(params);
      p["alpha1"] = m.alpha1;
      p["v"] = m.v;
      p["lambda"] = m.lambda;
      break;
    }
    case Family::Mixture: {
      const auto& m = std::get<MixtureParams>(params);
      p["mu1"] = m.mu1;
      p["mu0"] = m.mu0;
      p["sigma2"] = m.sigma2;
      p["p11"] = m.p11;
      p["p10"] = m.p10;
      break;
    }
    case Family::HarM1:
    case Family::HarM2: {
      const auto& m = std::get<HarParams>(params);
      p["alpha1"] = m.alpha1;
      p["alpha2"] = m.alpha2;
      p["omega"] = m.omega_h;
      p["phi1"] = m.phi1;
      if (spec.family == Family::HarM1) {
        p["phi2"] = m.phi2;
        p["phi3"] = m.phi3;
      }
      p["gamma"] = m.gamma;
      p["sigmaV2"] = m.sigmaV2;
      break;
    }
  }
  doc["params"] = p;
  doc["constraints"] = constraints_json(spec);
  return doc;
}

std::pair<ModelSpec, ModelParams> model_from_json(const json& doc) {
  if (!doc.contains("family") || !doc.contains("params")) {
    throw ConfigError("model json: 'family' and 'params' required");
  }
  const ModelSpec spec = spec_from_name(doc["family"].get<std::string>());
  const json& p = doc["params"];
  const auto get = [&](const char* key, double fallback = 0.0) {
    return p.contains(key) ? p[key].get<double>() : fallback;
  };
  switch (spec.family) {
    case Family::Ar1Gaussian:
      return {spec, Ar1GaussianParams{get("alpha1"), get("sigma2", 1.0)}};
    case Family::LinearPsi: {
      LinearPsiParams m;
      m.family = spec.psi_family;
      for (const auto& name : param_names(spec)) {
        if (name == "sigma2") continue;
        m.rho.push_back(get(name.c_str()));
      }
      m.sigma2 = get("sigma2", 1.0);
      return {spec, m};
    }
    case Family::SkewTAr1:
      return {spec, SkewTAr1Params{get("alpha1"), get("v", 5.0), get("lambda")}};
    case Family::Mixture: {
      MixtureParams m;
      m.mu1 = get("mu1");
      m.mu0 = get("mu0");
      m.sigma2 = get("sigma2", 1.0);
      m.p11 = get("p11", 0.5);
      m.p10 = get("p10", 0.5);
      return {spec, m};
    }
    case Family::HarM1:
    case Family::HarM2: {
      HarParams m;
      m.alpha1 = get("alpha1");
      m.alpha2 = get("alpha2");
      m.omega_h = get("omega");
      m.phi1 = get("phi1");
      m.phi2 = get("phi2");
      m.phi3 = get("phi3");
      m.gamma = get("gamma");
      m.sigmaV2 = get("sigmaV2", 1.0);
      return {spec, m};
    }
  }
  throw ConfigError("model json: unknown family");
}

json fitted_to_json(const FittedModel& fit) {
  json doc;
  doc["family"] = family_name(fit.spec);
  doc["theta_hat"] = std::vector<double>(fit.theta_hat.data(),
                                         fit.theta_hat.data() + fit.theta_hat.size());
  std::vector<double> vinv;
  vinv.reserve(fit.dim() * fit.dim());
  for (int i = 0; i < fit.dim(); ++i) {
    for (int j = 0; j < fit.dim(); ++j) vinv.push_back(fit.vinv_hat(i, j));
  }
  doc["vinv_hat"] = vinv;
  doc["loglik"] = fit.loglik_at_max;
  doc["effective_T"] = fit.effective_T;
  return doc;
}

FittedModel fitted_from_json(const json& doc) {
  FittedModel fit;
  fit.spec = spec_from_name(doc.at("family").get<std::string>());
  const auto theta = doc.at("theta_hat").get<std::vector<double>>();
  fit.theta_hat = Eigen::Map<const Eigen::VectorXd>(theta.data(), theta.size());
  const auto vinv = doc.at("vinv_hat").get<std::vector<double>>();
  const int p = static_cast<int>(theta.size());
  if (static_cast<int>(vinv.size()) != p * p) throw DataError("fitted json: vinv size mismatch");
  fit.vinv_hat.resize(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) fit.vinv_hat(i, j) = vinv[i * p + j];
  }
  fit.loglik_at_max = doc.at("loglik").get<double>();
  fit.effective_T = doc.at("effective_T").get<int>();
  return fit;
}

void write_fitted_json(const FittedModel& fit, const std::string& path) {
  write_json(fitted_to_json(fit), path);
}

FittedModel read_fitted_json(const std::string& path) { return fitted_from_json(read_json(path)); }

void write_boundary_csv(const BoundarySet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("csv: cannot write " + path);
  const int d = set.grid.dim;
  const int p = set.points.empty() ? 0 : static_cast<int>(set.points.front().param.size());
  out << "point_id";
  for (int i = 1; i <= d; ++i) out << ",x" << i;
  for (int i = 1; i <= p; ++i) out << ",param" << i;
  out << ",wald_value,feasible\n";
  for (std::size_t k = 0; k < set.points.size(); ++k) {
    const BoundaryPoint& pt = set.points[k];
    out << k;
    for (int i = 0; i < d; ++i) out << ',' << format_double(pt.x(i));
    for (int i = 0; i < p; ++i) out << ',' << format_double(pt.param(i));
    out << ',' << format_double(pt.wald_value) << ',' << (pt.feasible ? 1 : 0) << '\n';
  }
}

BoundarySet read_boundary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_line(line);
  int d = 0, p = 0;
  for (const std::string& h : header) {
    if (h.rfind("x", 0) == 0 && h.size() > 1 && std::isdigit(h[1])) ++d;
    if (h.rfind("param", 0) == 0) ++p;
  }
  if (header.size() != static_cast<std::size_t>(3 + d + p)) {
    throw DataError("csv: unexpected boundary header in " + path);
  }
  BoundarySet set;
  set.grid.dim = d;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) throw DataError("csv: bad boundary row in " + path);
    BoundaryPoint pt;
    pt.x.resize(d);
    pt.param.resize(p);
    int col = 1;
    for (int i = 0; i < d; ++i) pt.x(i) = to_double(fields[col++]);
    for (int i = 0; i < p; ++i) pt.param(i) = to_double(fields[col++]);
    pt.wald_value = to_double(fields[col++]);
    pt.feasible = to_double(fields[col]) != 0.0;
    set.points.push_back(std::move(pt));
  }
  return set;
}

void write_frames_csv(const FrameSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("csv: cannot write " + path);
  out << "frame_id,y,ordinate,feasible\n";
  const std::vector<double>& grid = *set.y_grid;
  const auto emit = [&](const DensityCurve& curve) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      out << curve.param_point_id << ',' << format_double(grid[g]) << ','
          << format_double(curve.ordinates[g]) << ",1\n";
    }
  };
  emit(set.plug_in);
  for (const DensityCurve& curve : set.curves) emit(curve);
}

json frames_meta_json(const FrameSet& set) {
  json doc;
  doc["model"] = family_name(set.spec);
  doc["target"] = target_name(set.target);
  doc["level"] = set.level;
  doc["c_alpha"] = set.c_alpha;
  doc["effective_T"] = set.effective_T;
  doc["conditioning"] = set.conditioning_summary;
  doc["eta_space"] = set.eta_space;
  doc["grid"] = {{"dim", set.grid.dim}, {"n", set.grid.n}, {"mesh", set.grid.mesh},
                 {"hash", set.grid_hash}};
  doc["n_frames"] = set.curves.size();
  doc["y_grid"] = {{"lo", set.y_grid->front()}, {"hi", set.y_grid->back()},
                   {"points", set.y_grid->size()}};
  return doc;
}

FramesFile read_frames_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: empty file " + path);
  FramesFile file;
  int current_id = 0;
  bool have_frame = false;
  bool grid_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != 4) throw DataError("csv: bad frames row in " + path);
    const int id = static_cast<int>(to_double(fields[0]));
    const double y = to_double(fields[1]);
    const double ord = to_double(fields[2]);
    if (!have_frame || id != current_id) {
      file.frame_ids.push_back(id);
      file.ordinates.emplace_back();
      if (have_frame) grid_done = true;
      current_id = id;
      have_frame = true;
    }
    if (!grid_done) file.y_grid.push_back(y);
    file.ordinates.back().push_back(ord);
  }
  return file;
}

void write_frames_svg(const FrameSet& set, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<double>& grid = *set.y_grid;
  double peak = 0.0;
  for (const DensityCurve& curve : set.curves) {
    for (double o : curve.ordinates) peak = std::max(peak, o);
  }
  for (double o : set.plug_in.ordinates) peak = std::max(peak, o);
  if (peak <= 0.0) peak = 1.0;

  const double width = 800.0, height = 500.0, pad = 20.0;
  const double lo = grid.front(), hi = grid.back();
  const auto polyline = [&](const DensityCurve& curve) {
    std::ostringstream os;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double px = pad + (grid[g] - lo) / (hi - lo) * (width - 2 * pad);
      const double py = height - pad - curve.ordinates[g] / peak * (height - 2 * pad);
      if (g) os << ' ';
      os << format_double(px) << ',' << format_double(py);
    }
    return os.str();
  };
  const std::string plug_points = polyline(set.plug_in);

  for (std::size_t k = 0; k < set.curves.size(); ++k) {
    std::ostringstream name;
    name << dir << "/frame_" << std::setw(4) << std::setfill('0') << k << ".svg";
    std::ofstream out(name.str());
    if (!out) throw DataError("svg: cannot write " + name.str());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "  <polyline fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4 3\" points=\""
        << plug_points << "\"/>\n";
    out << "  <polyline fill=\"none\" stroke=\"#1060c0\" points=\"" << polyline(set.curves[k])
        << "\"/>\n";
    out << "</svg>\n";
  }
}

void write_scores_csv(const ScoreSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("csv: cannot write " + path);
  out << "grid_point_id,ls1,ls2,qs1,qs2,ls_diff,qs_diff\n";
  for (std::size_t k = 0; k < series.grid_point_ids.size(); ++k) {
    out << series.grid_point_ids[k] << ',' << format_double(series.ls1[k]) << ','
        << format_double(series.ls2[k]) << ',' << format_double(series.qs1[k]) << ','
        << format_double(series.qs2[k]) << ',' << format_double(series.ls_diff[k]) << ','
        << format_double(series.qs_diff[k]) << '\n';
  }
}

ScoreSeries read_scores_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: empty file " + path);
  ScoreSeries series;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != 7) throw DataError("csv: bad scores row in " + path);
    series.grid_point_ids.push_back(static_cast<int>(to_double(fields[0])));
    series.ls1.push_back(to_double(fields[1]));
    series.ls2.push_back(to_double(fields[2]));
    series.qs1.push_back(to_double(fields[3]));
    series.qs2.push_back(to_double(fields[4]));
    series.ls_diff.push_back(to_double(fields[5]));
    series.qs_diff.push_back(to_double(fields[6]));
  }
  return series;
}

json coverage_to_json(const CoverageReport& report, const ModelSpec& spec,
                      const Eigen::VectorXd& theta0, std::uint64_t seed) {
  json doc;
  doc["family"] = family_name(spec);
  doc["theta0"] = std::vector<double>(theta0.data(), theta0.data() + theta0.size());
  doc["T"] = report.T;
  doc["level"] = report.level;
  doc["c_alpha"] = report.c_alpha;
  doc["reps"] = report.reps;
  doc["hits"] = report.hits;
  doc["skipped"] = report.skipped;
  doc["coverage"] = report.coverage;
  doc["avg_radius"] = report.avg_radius;
  doc["seed"] = seed;
  return doc;
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

json make_manifest(const std::string& command, const json& config, std::uint64_t seed,
                   const std::vector<std::string>& artifacts) {
  json doc;
  doc["command"] = command;
  doc["config"] = config;
  char hex[20];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(config.dump())));
  doc["config_hash"] = hex;
  doc["seed"] = seed;
  doc["version"] = "0.1.0";
  doc["artifacts"] = artifacts;
  return doc;
}

void write_json(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("json: cannot write " + path);
  out << doc.dump(2) << '\n';
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("json: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError("json: parse failure in " + path + ": " + e.what());
  }
  return doc;
}

}  // namespace fcs
