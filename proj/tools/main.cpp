// Command-line driver: simulation, fitting, boundary construction, frame and
// score exports, and coverage studies. Flat JSON config files mirror the
// flags; precedence is flags > file > defaults.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fcs/confidence.hpp"
#include "fcs/errors.hpp"
#include "fcs/estimation.hpp"
#include "fcs/forecast.hpp"
#include "fcs/io.hpp"
#include "fcs/models.hpp"
#include "fcs/scoring.hpp"
#include "fcs/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ParamFlags {
  double alpha1 = 0.6, alpha2 = 0.0, sigma2 = 1.0;
  double ar = 0.6, ma = 0.0, d = 0.3;
  double v = 5.0, lambda = 0.0;
  double mu1 = 3.0, mu0 = 0.0, p11 = 0.6, p10 = 0.4;
  double omega = -0.3, phi1 = 0.38, phi2 = 0.3, phi3 = 0.22, gamma = -0.15, sigmaV2 = 0.35;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--alpha1", alpha1, "AR / return intercept parameter");
    cmd->add_option("--alpha2", alpha2, "HAR return AR coefficient");
    cmd->add_option("--sigma2", sigma2, "innovation variance");
    cmd->add_option("--ar", ar, "ARMA autoregressive coefficient");
    cmd->add_option("--ma", ma, "ARMA moving-average coefficient");
    cmd->add_option("--d", d, "ARFIMA fractional parameter");
    cmd->add_option("--v", v, "skew-t degrees of freedom");
    cmd->add_option("--lambda", lambda, "skew-t skewness");
    cmd->add_option("--mu1", mu1, "mixture state-1 mean");
    cmd->add_option("--mu0", mu0, "mixture state-0 mean");
    cmd->add_option("--p11", p11, "mixture pr(1|1)");
    cmd->add_option("--p10", p10, "mixture pr(1|0)");
    cmd->add_option("--omega", omega, "HAR intercept");
    cmd->add_option("--phi1", phi1, "HAR daily coefficient");
    cmd->add_option("--phi2", phi2, "HAR weekly coefficient");
    cmd->add_option("--phi3", phi3, "HAR monthly coefficient");
    cmd->add_option("--gamma", gamma, "HAR leverage coefficient");
    cmd->add_option("--sigmaV2", sigmaV2, "HAR log-variance innovation variance");
  }

  fcs::ModelParams build(const fcs::ModelSpec& spec) const {
    switch (spec.family) {
      case fcs::Family::Ar1Gaussian:
        return fcs::Ar1GaussianParams{alpha1, sigma2};
      case fcs::Family::LinearPsi: {
        fcs::LinearPsiParams p;
        p.family = spec.psi_family;
        switch (spec.psi_family) {
          case fcs::PsiFamily::Ar1: p.rho = {ar}; break;
          case fcs::PsiFamily::Arma11: p.rho = {ar, ma}; break;
          case fcs::PsiFamily::Arfima: p.rho = {d}; break;
        }
        p.sigma2 = sigma2;
        return p;
      }
      case fcs::Family::SkewTAr1:
        return fcs::SkewTAr1Params{alpha1, v, lambda};
      case fcs::Family::Mixture: {
        fcs::MixtureParams p;
        p.mu1 = mu1;
        p.mu0 = mu0;
        p.sigma2 = sigma2;
        p.p11 = p11;
        p.p10 = p10;
        return p;
      }
      case fcs::Family::HarM1:
      case fcs::Family::HarM2: {
        fcs::HarParams p;
        p.alpha1 = alpha1;
        p.alpha2 = alpha2;
        p.omega_h = omega;
        p.phi1 = phi1;
        p.phi2 = spec.family == fcs::Family::HarM2 ? 0.0 : phi2;
        p.phi3 = spec.family == fcs::Family::HarM2 ? 0.0 : phi3;
        p.gamma = gamma;
        p.sigmaV2 = sigmaV2;
        return p;
      }
    }
    throw fcs::ConfigError("unknown model family");
  }
};

json load_config(int argc, char** argv) {
  for (int i = 1; i < argc - 1; ++i) {
    if (std::string(argv[i]) == "--config") return fcs::read_json(argv[i + 1]);
  }
  return json::object();
}

// Applies a config-file value to every option the command line left at its
// default, preserving flags > file > defaults.
void apply_config(CLI::App* cmd, const json& cfg) {
  if (cfg.empty()) return;
  for (CLI::Option* opt : cmd->get_options()) {
    const std::string name = opt->get_name();
    if (name.size() < 3 || name.rfind("--", 0) != 0) continue;
    const std::string key = name.substr(2);
    if (!cfg.contains(key) || opt->count() > 0) continue;
    const json& value = cfg[key];
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_boolean()) {
      if (!value.get<bool>()) continue;
      text = "true";
    } else {
      text = value.dump();
    }
    opt->add_result(text);
    opt->run_callback();
  }
}

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

fcs::GridSpec resolve_grid(int dim, int grid_n, bool mesh_flag, bool polar_flag) {
  fcs::GridSpec grid = fcs::GridSpec::defaults(dim);
  if (grid_n > 0) grid.n = grid_n;
  if (mesh_flag) grid.mesh = true;
  if (polar_flag) grid.mesh = false;
  if (grid.mesh && dim != 3) throw fcs::ConfigError("mesh grids are 3-d only");
  return grid;
}

fcs::FittedModel load_fit(const std::string& fitted_path, const std::string& data_path) {
  fcs::FittedModel fit = fcs::read_fitted_json(fitted_path);
  if (!data_path.empty()) {
    fcs::SeriesData data = fcs::read_series_csv(data_path);
    const int expect = fcs::effective_sample_size(fit.spec, data);
    if (expect != fit.effective_T) {
      throw fcs::DataError("fitted model and data disagree on the sample size");
    }
    fit.data = std::make_shared<fcs::SeriesData>(std::move(data));
  }
  return fit;
}

// The eta map used by conditional sets; the spec's dimension-reduction
// families are HAR (3-d) and linear-psi (2-d).
fcs::EtaMap conditional_map(const fcs::FittedModel& fit) {
  switch (fit.spec.family) {
    case fcs::Family::HarM1:
    case fcs::Family::HarM2:
      return fcs::har_eta_map(fit);
    case fcs::Family::LinearPsi:
      return fcs::linear_psi_eta_map(fit);
    default:
      throw fcs::ConfigError("conditional sets are available for HAR and linear-psi families");
  }
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    std::uint64_t seed, const std::vector<std::string>& artifacts) {
  fcs::write_json(fcs::make_manifest(command, config, seed, artifacts),
                  (dir / "manifest.json").string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fcs: confidence sets for one-step-ahead forecast distributions"};
  app.require_subcommand(1);

  std::string config_path, out = ".", family = "ar1", data_path, fitted_path, fitted1, fitted2;
  std::string kind = "auto", target = "auto", model_path;
  double level = 0.95, realized = 0.0;
  int T = 100, reps = 1000, grid_n = 0, threads = 1, max_iters = 4000, restarts = 3;
  std::uint64_t seed = 1;
  bool mesh_flag = false, polar_flag = false, svg = false;
  std::string method = "simplex";

  const auto add_common = [&](CLI::App* cmd, bool with_seed) {
    cmd->add_option("--config", config_path, "flat JSON config file");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--threads", threads, "worker thread cap");
    if (with_seed) cmd->add_option("--seed", seed, "RNG seed");
  };

  ParamFlags params;

  CLI::App* sim = app.add_subcommand("simulate", "simulate a model and write data.csv");
  add_common(sim, true);
  sim->add_option("--family", family, "model family");
  sim->add_option("--model", model_path, "model JSON (overrides parameter flags)");
  sim->add_option("--T", T, "sample size");
  params.add_options(sim);

  CLI::App* simhar = app.add_subcommand("simulate-har", "synthetic HAR analysis sample");
  add_common(simhar, true);
  simhar->add_option("--T", T, "sample size")->default_val(762);

  CLI::App* fit_cmd = app.add_subcommand("fit", "maximum-likelihood fit");
  add_common(fit_cmd, false);
  fit_cmd->add_option("--family", family, "model family");
  fit_cmd->add_option("--data", data_path, "input CSV")->required();
  fit_cmd->add_option("--method", method, "simplex | quasi-newton");
  fit_cmd->add_option("--max-iters", max_iters, "optimizer iteration cap");
  fit_cmd->add_option("--restarts", restarts, "optimizer restarts");

  CLI::App* boundary_cmd = app.add_subcommand("boundary", "traverse the Wald boundary");
  add_common(boundary_cmd, false);
  boundary_cmd->add_option("--fitted", fitted_path, "fitted model JSON")->required();
  boundary_cmd->add_option("--data", data_path, "conditioning data CSV");
  boundary_cmd->add_option("--level", level, "confidence level (1 - alpha)");
  boundary_cmd->add_option("--kind", kind, "unconditional | conditional | auto");
  boundary_cmd->add_option("--grid-n", grid_n, "sphere grid resolution");
  boundary_cmd->add_flag("--mesh", mesh_flag, "use the 3-d surface mesh layout");
  boundary_cmd->add_flag("--polar", polar_flag, "force the polar-angle layout");

  CLI::App* frames_cmd = app.add_subcommand("frames", "export bounding density curves");
  add_common(frames_cmd, false);
  frames_cmd->add_option("--fitted", fitted_path, "fitted model JSON")->required();
  frames_cmd->add_option("--data", data_path, "conditioning data CSV")->required();
  frames_cmd->add_option("--level", level, "confidence level (1 - alpha)");
  frames_cmd->add_option("--kind", kind, "unconditional | conditional | auto");
  frames_cmd->add_option("--target", target, "series | return | variance | auto");
  frames_cmd->add_option("--grid-n", grid_n, "sphere grid resolution");
  frames_cmd->add_flag("--mesh", mesh_flag, "use the 3-d surface mesh layout");
  frames_cmd->add_flag("--polar", polar_flag, "force the polar-angle layout");
  frames_cmd->add_flag("--svg", svg, "emit per-frame SVG polylines");

  CLI::App* score_cmd = app.add_subcommand("score-diff", "matched scoring-rule differences");
  add_common(score_cmd, false);
  score_cmd->add_option("--fitted1", fitted1, "model 1 fitted JSON")->required();
  score_cmd->add_option("--fitted2", fitted2, "model 2 fitted JSON")->required();
  score_cmd->add_option("--data", data_path, "conditioning data CSV")->required();
  score_cmd->add_option("--level", level, "confidence level (1 - alpha)");
  score_cmd->add_option("--target", target, "return | variance");
  score_cmd->add_option("--realized", realized, "realized value to score")->required();
  score_cmd->add_option("--grid-n", grid_n, "sphere grid resolution");
  score_cmd->add_flag("--mesh", mesh_flag, "use the 3-d surface mesh layout");
  score_cmd->add_flag("--polar", polar_flag, "force the polar-angle layout");

  CLI::App* cover_cmd = app.add_subcommand("coverage", "Monte Carlo coverage study");
  add_common(cover_cmd, true);
  cover_cmd->add_option("--family", family, "model family");
  cover_cmd->add_option("--T", T, "sample size per replication");
  cover_cmd->add_option("--level", level, "confidence level (1 - alpha)");
  cover_cmd->add_option("--reps", reps, "number of replications");
  params.add_options(cover_cmd);

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e) == 0 ? 0 : 2;
    }
    CLI::App* cmd = app.get_subcommands().front();
    apply_config(cmd, load_config(argc, argv));
    const fs::path dir = ensure_out_dir(out);

    // Execution-environment keys stay out of the manifest so reruns at any
    // thread count produce byte-identical artifacts.
    json cfg = json::object();
    const auto cfg_set = [&](const char* key, const json& value) { cfg[key] = value; };

    if (cmd == sim || cmd == simhar) {
      fcs::ModelSpec spec;
      fcs::ModelParams mp;
      if (cmd == simhar) {
        spec = fcs::ModelSpec::har_m1();
        mp = fcs::synthetic_har_params();
      } else if (!model_path.empty()) {
        std::tie(spec, mp) = fcs::model_from_json(fcs::read_json(model_path));
      } else {
        spec = fcs::spec_from_name(family);
        mp = params.build(spec);
      }
      const fcs::SeriesData data = fcs::simulate(spec, mp, T, seed);
      fcs::write_series_csv(data, (dir / "data.csv").string());
      fcs::write_json(fcs::model_to_json(spec, mp), (dir / "model.json").string());
      const std::string name = cmd == simhar ? "simulate-har" : "simulate";
      cfg_set("command", name);
      cfg_set("model", fcs::model_to_json(spec, mp));
      cfg_set("T", T);
      cfg_set("seed", seed);
      write_manifest(dir, name, cfg, seed, {"data.csv", "model.json"});
      return 0;
    }

    if (cmd == fit_cmd) {
      const fcs::ModelSpec spec = fcs::spec_from_name(family);
      const fcs::SeriesData data = fcs::read_series_csv(data_path);
      fcs::OptimizerConfig ocfg;
      ocfg.max_iters = max_iters;
      ocfg.restarts = restarts;
      if (method == "quasi-newton") {
        ocfg.method = fcs::OptimizerConfig::Method::QuasiNewton;
      } else if (method != "simplex") {
        throw fcs::ConfigError("fit: unknown method '" + method + "'");
      }
      const fcs::FittedModel fit = fcs::mle_fit(spec, data, ocfg);
      fcs::write_fitted_json(fit, (dir / "fitted.json").string());
      cfg_set("command", "fit");
      cfg_set("family", family);
      cfg_set("data", data_path);
      cfg_set("method", method);
      write_manifest(dir, "fit", cfg, 0, {"fitted.json"});
      return 0;
    }

    if (cmd == boundary_cmd || cmd == frames_cmd) {
      fcs::FittedModel fit = load_fit(fitted_path, data_path);
      const bool is_har =
          fit.spec.family == fcs::Family::HarM1 || fit.spec.family == fcs::Family::HarM2;
      std::string kind_resolved = kind;
      if (kind == "auto") kind_resolved = is_har ? "conditional" : "unconditional";
      const bool conditional = kind_resolved == "conditional";
      if (!conditional && kind_resolved != "unconditional") {
        throw fcs::ConfigError("unknown kind '" + kind + "'");
      }

      fcs::EtaMap map;
      int dim = fit.dim();
      if (conditional) {
        if (!fit.data) throw fcs::ConfigError("conditional sets need --data");
        map = conditional_map(fit);
        dim = map.dim_eta;
      }
      const fcs::WaldSpec wspec = fcs::WaldSpec::from_level(
          conditional ? fcs::WaldSpec::Kind::Conditional : fcs::WaldSpec::Kind::Unconditional,
          level, dim);
      const fcs::GridSpec grid = resolve_grid(dim, grid_n, mesh_flag, polar_flag);
      const fcs::BoundarySet boundary =
          fcs::boundary_traverse(fit, wspec, grid, conditional ? &map : nullptr, threads);

      cfg_set("level", level);
      cfg_set("kind", kind_resolved);
      cfg_set("fitted", fitted_path);
      cfg_set("grid_n", grid.n);
      cfg_set("mesh", grid.mesh);

      if (cmd == boundary_cmd) {
        fcs::write_boundary_csv(boundary, (dir / "boundary.csv").string());
        cfg_set("command", "boundary");
        write_manifest(dir, "boundary", cfg, 0, {"boundary.csv"});
        return 0;
      }

      std::string target_resolved = target;
      if (target == "auto") target_resolved = is_har ? "return" : "series";
      const fcs::Target tgt = fcs::target_from_name(target_resolved);
      const fcs::FrameSet frames = fcs::bounding_frames(fit, boundary, tgt, threads);
      fcs::write_frames_csv(frames, (dir / "frames.csv").string());
      fcs::write_json(fcs::frames_meta_json(frames), (dir / "frames_meta.json").string());
      std::vector<std::string> artifacts = {"frames.csv", "frames_meta.json"};
      if (svg) {
        fcs::write_frames_svg(frames, (dir / "svg").string());
        artifacts.push_back("svg/");
      }
      cfg_set("command", "frames");
      cfg_set("target", target_resolved);
      write_manifest(dir, "frames", cfg, 0, artifacts);
      return 0;
    }

    if (cmd == score_cmd) {
      fcs::FittedModel fit1 = load_fit(fitted1, data_path);
      fcs::FittedModel fit2 = load_fit(fitted2, data_path);
      const fcs::EtaMap map1 = conditional_map(fit1);
      const fcs::EtaMap map2 = conditional_map(fit2);
      if (map1.dim_eta != map2.dim_eta) {
        throw fcs::ConfigError("score-diff: models live in different eta spaces");
      }
      const fcs::WaldSpec wspec =
          fcs::WaldSpec::from_level(fcs::WaldSpec::Kind::Conditional, level, map1.dim_eta);
      const fcs::GridSpec grid = resolve_grid(map1.dim_eta, grid_n, mesh_flag, polar_flag);
      const fcs::Target tgt = fcs::target_from_name(target == "auto" ? "return" : target);

      const fcs::BoundarySet b1 = fcs::boundary_traverse(fit1, wspec, grid, &map1, threads);
      const fcs::BoundarySet b2 = fcs::boundary_traverse(fit2, wspec, grid, &map2, threads);
      const fcs::FrameSet f1 = fcs::bounding_frames(fit1, b1, tgt, threads);
      const fcs::FrameSet f2 = fcs::bounding_frames(fit2, b2, tgt, threads);
      const fcs::ScoreSeries series = fcs::score_difference_series(f1, f2, realized);
      fcs::write_scores_csv(series, (dir / "scores.csv").string());
      cfg_set("command", "score-diff");
      cfg_set("fitted1", fitted1);
      cfg_set("fitted2", fitted2);
      cfg_set("level", level);
      cfg_set("target", fcs::target_name(tgt));
      cfg_set("realized", realized);
      cfg_set("grid_n", grid.n);
      cfg_set("mesh", grid.mesh);
      write_manifest(dir, "score-diff", cfg, 0, {"scores.csv"});
      return 0;
    }

    if (cmd == cover_cmd) {
      const fcs::ModelSpec spec = fcs::spec_from_name(family);
      const fcs::ModelParams mp = params.build(spec);
      const fcs::CoverageReport report =
          fcs::coverage_mc(spec, mp, T, level, reps, seed, threads);
      const fcs::SeriesData probe = fcs::simulate(spec, mp, T, seed);
      const Eigen::VectorXd theta0 = fcs::params_to_theta(spec, mp, probe);
      fcs::write_json(fcs::coverage_to_json(report, spec, theta0, seed),
                      (dir / "coverage.json").string());
      cfg_set("command", "coverage");
      cfg_set("family", family);
      cfg_set("model", fcs::model_to_json(spec, mp));
      cfg_set("T", T);
      cfg_set("level", level);
      cfg_set("reps", reps);
      cfg_set("seed", seed);
      write_manifest(dir, "coverage", cfg, seed, {"coverage.json"});
      return 0;
    }
    throw fcs::ConfigError("no command selected");
  } catch (const fcs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const fcs::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const fcs::EstimationError& e) {
    std::cerr << "estimation error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 5;
  }
}
