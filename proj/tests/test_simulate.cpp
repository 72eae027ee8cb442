#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fcs/errors.hpp"
#include "fcs/models.hpp"
#include "fcs/rng.hpp"
#include "fcs/simulate.hpp"

using namespace fcs;

TEST_CASE("same seed reproduces bitwise-identical draws") {
  const auto check_same = [](const ModelSpec& spec, const ModelParams& p) {
    const SeriesData a = simulate(spec, p, 60, 424242);
    const SeriesData b = simulate(spec, p, 60, 424242);
    REQUIRE(a.size() == b.size());
    if (spec.family == Family::HarM1 || spec.family == Family::HarM2) {
      CHECK(a.r == b.r);
      CHECK(a.v == b.v);
    } else {
      CHECK(a.y == b.y);
      CHECK(a.d == b.d);
    }
    const SeriesData c = simulate(spec, p, 60, 424243);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double lhs = spec.family == Family::HarM1 || spec.family == Family::HarM2
                             ? a.r[i] : a.y[i];
      const double rhs = spec.family == Family::HarM1 || spec.family == Family::HarM2
                             ? c.r[i] : c.y[i];
      if (lhs != rhs) differs = true;
    }
    CHECK(differs);
  };
  check_same(ModelSpec::ar1(), Ar1GaussianParams{0.6, 1.0});
  check_same(ModelSpec::skewt_ar1(), SkewTAr1Params{0.8, 5.0, 0.5});
  LinearPsiParams arf;
  arf.family = PsiFamily::Arfima;
  arf.rho = {0.3};
  arf.sigma2 = 1.0;
  check_same(ModelSpec::linear_psi(PsiFamily::Arfima), arf);
  MixtureParams mix;
  mix.mu1 = 3.0;
  mix.p11 = 0.6;
  mix.p10 = 0.4;
  check_same(ModelSpec::mixture(), mix);
  check_same(ModelSpec::har_m1(), synthetic_har_params());
}

TEST_CASE("AR(1) long-run lag-1 autocorrelation matches alpha") {
  const SeriesData data = simulate(ModelSpec::ar1(), Ar1GaussianParams{0.6, 1.0}, 1000000, 7);
  double mean = 0.0;
  for (double v : data.y) mean += v;
  mean /= static_cast<double>(data.y.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < data.y.size(); ++i) {
    const double c = data.y[i] - mean;
    den += c * c;
    if (i > 0) num += c * (data.y[i - 1] - mean);
  }
  CHECK(std::fabs(num / den - 0.6) < 0.01);
}

TEST_CASE("mixture chain hits its stationary occupation rate") {
  MixtureParams p;
  p.mu1 = 3.0;
  p.mu0 = 0.0;
  p.sigma2 = 1.0;
  p.p11 = 0.6;
  p.p10 = 0.4;
  const SeriesData data = simulate(ModelSpec::mixture(), p, 1000000, 19);
  double frac = 0.0;
  for (int d : data.d) frac += d;
  frac /= static_cast<double>(data.d.size());
  // stationary pr(d = 1) = p10 / (1 - p11 + p10) = 0.5
  CHECK(std::fabs(frac - 0.5) < 0.01);
}

TEST_CASE("skew-t draws are standardized (Monte Carlo)") {
  CounterRng rng(99);
  const int n = 1000000;
  double m = 0.0, s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = skewt_quantile(rng.next_uniform(), 5.0, 0.5);
    m += x;
    s += x * x;
  }
  m /= n;
  s = s / n - m * m;
  CHECK(std::fabs(m) < 1e-2);
  CHECK(std::fabs(s - 1.0) < 1e-2);
}

TEST_CASE("HAR simulator produces valid bivariate data") {
  const SeriesData data = simulate(ModelSpec::har_m1(), synthetic_har_params(), 762, 42);
  REQUIRE(data.kind == SeriesKind::ReturnsVariance);
  REQUIRE(data.r.size() == 762);
  double mean_lv = 0.0;
  for (double v : data.v) {
    REQUIRE(v > 0.0);
    mean_lv += std::log(v);
  }
  mean_lv /= 762.0;
  // unconditional log-variance level is omega / (1 - phi1 - phi2 - phi3) = -3
  CHECK(std::fabs(mean_lv + 3.0) < 0.5);
  data.validate();
}

TEST_CASE("simulate validates its inputs") {
  CHECK_THROWS_AS(simulate(ModelSpec::ar1(), Ar1GaussianParams{1.2, 1.0}, 50, 1), ConfigError);
  CHECK_THROWS_AS(simulate(ModelSpec::ar1(), Ar1GaussianParams{0.5, 1.0}, 0, 1), ConfigError);
}
