#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fcs/errors.hpp"
#include "fcs/io.hpp"
#include "fcs/simulate.hpp"

using namespace fcs;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / ("fcs_io_test_" + std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FCS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("series CSV round-trips all three schemas without loss") {
  const fs::path dir = temp_dir();
  {
    const SeriesData a = simulate(ModelSpec::ar1(), Ar1GaussianParams{0.6, 1.0}, 40, 3);
    write_series_csv(a, (dir / "u.csv").string());
    const SeriesData b = read_series_csv((dir / "u.csv").string());
    CHECK(a.y == b.y);
  }
  {
    MixtureParams p;
    p.mu1 = 3.0;
    p.p11 = 0.6;
    p.p10 = 0.4;
    const SeriesData a = simulate(ModelSpec::mixture(), p, 40, 3);
    write_series_csv(a, (dir / "m.csv").string());
    const SeriesData b = read_series_csv((dir / "m.csv").string());
    CHECK(a.y == b.y);
    CHECK(a.d == b.d);
  }
  {
    const SeriesData a = simulate(ModelSpec::har_m1(), synthetic_har_params(), 60, 3);
    write_series_csv(a, (dir / "h.csv").string());
    const SeriesData b = read_series_csv((dir / "h.csv").string());
    CHECK(a.r == b.r);
    CHECK(a.v == b.v);
  }
  CHECK_THROWS_AS(read_series_csv((dir / "missing.csv").string()), DataError);
}

TEST_CASE("model JSON round-trip") {
  for (const char* name : {"ar1", "arma11", "arfima", "skewt_ar1", "mixture", "har_m1", "har_m2"}) {
    const ModelSpec spec = spec_from_name(name);
    ModelParams params;
    switch (spec.family) {
      case Family::Ar1Gaussian: params = Ar1GaussianParams{0.61, 1.23}; break;
      case Family::LinearPsi: {
        LinearPsiParams p;
        p.family = spec.psi_family;
        p.rho = spec.psi_family == PsiFamily::Arma11 ? std::vector<double>{0.5, -0.25}
                                                     : std::vector<double>{0.31};
        p.sigma2 = 0.77;
        params = p;
        break;
      }
      case Family::SkewTAr1: params = SkewTAr1Params{0.8, 5.5, -0.4}; break;
      case Family::Mixture: {
        MixtureParams p;
        p.mu1 = 2.9;
        p.mu0 = -0.1;
        p.sigma2 = 1.4;
        p.p11 = 0.66;
        p.p10 = 0.37;
        params = p;
        break;
      }
      case Family::HarM1:
      case Family::HarM2: params = synthetic_har_params(); break;
    }
    const nlohmann::json doc = model_to_json(spec, params);
    CHECK(doc.contains("constraints"));
    const auto [spec2, params2] = model_from_json(doc);
    CHECK(spec2 == spec);
    CHECK(model_to_json(spec2, params2) == doc);
  }
}

TEST_CASE("fitted-model JSON round-trip") {
  const SeriesData data = simulate(ModelSpec::ar1(), Ar1GaussianParams{0.6, 1.0}, 100, 7);
  const FittedModel fit = ar1_mle(data);
  const fs::path dir = temp_dir();
  write_fitted_json(fit, (dir / "fit.json").string());
  const FittedModel back = read_fitted_json((dir / "fit.json").string());
  CHECK(back.spec == fit.spec);
  CHECK(back.effective_T == fit.effective_T);
  CHECK(back.loglik_at_max == fit.loglik_at_max);
  CHECK((back.theta_hat - fit.theta_hat).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((back.vinv_hat - fit.vinv_hat).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("boundary CSV round-trip preserves every point") {
  const SeriesData data = simulate(ModelSpec::ar1(), Ar1GaussianParams{0.6, 1.0}, 100, 7);
  const FittedModel fit = ar1_mle(data);
  const WaldSpec spec = WaldSpec::from_level(WaldSpec::Kind::Unconditional, 0.95, 2);
  const BoundarySet set = boundary_traverse(fit, spec, GridSpec::defaults(2));
  const fs::path dir = temp_dir();
  write_boundary_csv(set, (dir / "b.csv").string());
  const BoundarySet back = read_boundary_csv((dir / "b.csv").string());
  REQUIRE(back.points.size() == set.points.size());
  for (std::size_t k = 0; k < set.points.size(); ++k) {
    CHECK((back.points[k].x - set.points[k].x).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((back.points[k].param - set.points[k].param).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(back.points[k].wald_value == set.points[k].wald_value);
    CHECK(back.points[k].feasible == set.points[k].feasible);
  }
}

TEST_CASE("frames and scores artifacts round-trip") {
  const SeriesData data = simulate(ModelSpec::ar1(), Ar1GaussianParams{0.6, 1.0}, 100, 7);
  const FittedModel fit = ar1_mle(data);
  const WaldSpec spec = WaldSpec::from_level(WaldSpec::Kind::Unconditional, 0.95, 2);
  GridSpec grid;
  grid.dim = 2;
  grid.n = 24;
  const BoundarySet boundary = boundary_traverse(fit, spec, grid);
  const FrameSet frames = bounding_frames(fit, boundary, Target::Series);
  const fs::path dir = temp_dir();
  write_frames_csv(frames, (dir / "f.csv").string());
  const FramesFile file = read_frames_csv((dir / "f.csv").string());
  REQUIRE(file.frame_ids.size() == frames.curves.size() + 1);
  CHECK(file.frame_ids.front() == -1);
  CHECK(file.y_grid == *frames.y_grid);
  CHECK(file.ordinates.front() == frames.plug_in.ordinates);
  for (std::size_t k = 0; k < frames.curves.size(); ++k) {
    CHECK(file.ordinates[k + 1] == frames.curves[k].ordinates);
  }

  ScoreSeries series;
  series.grid_point_ids = {0, 1, 5};
  series.ls1 = {-1.0, -2.0, -0.5};
  series.ls2 = {-1.5, -2.5, -0.25};
  series.qs1 = {0.1, 0.2, 0.3};
  series.qs2 = {0.05, 0.25, 0.4};
  series.ls_diff = {0.5, 0.5, -0.25};
  series.qs_diff = {0.05, -0.05, -0.1};
  write_scores_csv(series, (dir / "s.csv").string());
  const ScoreSeries back = read_scores_csv((dir / "s.csv").string());
  CHECK(back.grid_point_ids == series.grid_point_ids);
  CHECK(back.ls1 == series.ls1);
  CHECK(back.qs2 == series.qs2);
  CHECK(back.ls_diff == series.ls_diff);
}

TEST_CASE("svg frames are emitted as plain polylines") {
  const SeriesData data = simulate(ModelSpec::ar1(), Ar1GaussianParams{0.6, 1.0}, 100, 7);
  const FittedModel fit = ar1_mle(data);
  const WaldSpec spec = WaldSpec::from_level(WaldSpec::Kind::Unconditional, 0.95, 2);
  GridSpec grid;
  grid.dim = 2;
  grid.n = 8;
  const FrameSet frames =
      bounding_frames(fit, boundary_traverse(fit, spec, grid), Target::Series);
  const fs::path dir = temp_dir();
  write_frames_svg(frames, (dir / "svg").string());
  int count = 0;
  for (const auto& entry : fs::directory_iterator(dir / "svg")) {
    ++count;
    const std::string body = slurp(entry.path());
    CHECK(body.find("<svg") != std::string::npos);
    CHECK(body.find("<polyline") != std::string::npos);
  }
  CHECK(count == static_cast<int>(frames.curves.size()));
}

TEST_CASE("CLI determinism and exit codes") {
  const fs::path dir = temp_dir();
  const std::string base = "simulate --family ar1 --alpha1 0.6 --sigma2 1 --T 100 --seed 7";
  REQUIRE(run_cli(base + " --out " + (dir / "a").string()) == 0);
  REQUIRE(run_cli(base + " --out " + (dir / "b").string()) == 0);
  CHECK(slurp(dir / "a" / "data.csv") == slurp(dir / "b" / "data.csv"));
  CHECK(slurp(dir / "a" / "manifest.json") == slurp(dir / "b" / "manifest.json"));

  SUBCASE("config file supplies defaults, flags win") {
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"family":"ar1","alpha1":0.6,"sigma2":1.0,"T":100,"seed":7})";
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + (dir / "c").string()) == 0);
    CHECK(slurp(dir / "a" / "data.csv") == slurp(dir / "c" / "data.csv"));
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 8 --out " +
                    (dir / "d").string()) == 0);
    CHECK(slurp(dir / "a" / "data.csv") != slurp(dir / "d" / "data.csv"));
  }
  SUBCASE("exit codes by error class") {
    CHECK(run_cli("simulate --family nosuch --out " + (dir / "e").string()) == 2);
    CHECK(run_cli("fit --family ar1 --data /nonexistent.csv --out " + (dir / "e").string()) == 3);
    CHECK(run_cli("coverage --family ar1 --reps 10 --out " + (dir / "e").string()) == 2);
  }
  SUBCASE("fit then boundary artifacts reproduce byte-for-byte") {
    REQUIRE(run_cli("fit --family ar1 --data " + (dir / "a" / "data.csv").string() + " --out " +
                    (dir / "fit1").string()) == 0);
    REQUIRE(run_cli("fit --family ar1 --data " + (dir / "a" / "data.csv").string() + " --out " +
                    (dir / "fit2").string()) == 0);
    CHECK(slurp(dir / "fit1" / "fitted.json") == slurp(dir / "fit2" / "fitted.json"));
    REQUIRE(run_cli("boundary --fitted " + (dir / "fit1" / "fitted.json").string() +
                    " --level 0.95 --out " + (dir / "bd1").string()) == 0);
    REQUIRE(run_cli("boundary --fitted " + (dir / "fit1" / "fitted.json").string() +
                    " --level 0.95 --threads 4 --out " + (dir / "bd2").string()) == 0);
    CHECK(slurp(dir / "bd1" / "boundary.csv") == slurp(dir / "bd2" / "boundary.csv"));
    CHECK(slurp(dir / "bd1" / "manifest.json") == slurp(dir / "bd2" / "manifest.json"));
  }
}

TEST_CASE("manifest carries a stable config hash") {
  const nlohmann::json cfg = {{"command", "simulate"}, {"seed", 7}};
  const nlohmann::json m1 = make_manifest("simulate", cfg, 7, {"data.csv"});
  const nlohmann::json m2 = make_manifest("simulate", cfg, 7, {"data.csv"});
  CHECK(m1 == m2);
  CHECK(m1["config_hash"].get<std::string>().size() == 16);
  CHECK(m1["version"] == "0.1.0");
}
