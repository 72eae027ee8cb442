#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fcs/errors.hpp"
#include "fcs/models.hpp"
#include "fcs/simulate.hpp"
#include "fcs/special.hpp"
#include "oracles.hpp"

using namespace fcs;

namespace {
SeriesData univariate(std::vector<double> y) {
  SeriesData d;
  d.y = std::move(y);
  return d;
}
}  // namespace

TEST_CASE("ar1 average log-likelihood") {
  SUBCASE("zero residuals give the Gaussian constant") {
    const double ll = ar1_avg_loglik({0.0, 1.0}, univariate({0.0, 0.0, 0.0}));
    CHECK(ll == doctest::Approx(-0.9189385332046727).epsilon(1e-12));
  }
  SUBCASE("matches the naive per-term oracle on simulated data") {
    const SeriesData data = simulate(ModelSpec::ar1(), Ar1GaussianParams{0.6, 1.0}, 100, 11);
    const double ll = ar1_avg_loglik({0.6, 1.0}, data);
    CHECK(ll == doctest::Approx(oracles::naive_ar1_loglik(data.y, 0.6, 1.0)).epsilon(1e-12));
  }
  SUBCASE("non-positive variance is a domain error") {
    CHECK_THROWS_AS(ar1_avg_loglik({0.5, 0.0}, univariate({1.0, 2.0, 3.0})), std::domain_error);
    CHECK_THROWS_AS(ar1_avg_loglik({0.5, -1.0}, univariate({1.0, 2.0, 3.0})), std::domain_error);
  }
}

TEST_CASE("psi weights") {
  SUBCASE("first fractional weight equals d") {
    LinearPsiParams p;
    p.family = PsiFamily::Arfima;
    p.rho = {0.3};
    CHECK(psi_weights(p, 1)[0] == doctest::Approx(0.3).epsilon(1e-15));
  }
  SUBCASE("AR(1) is its own AR(inf) form") {
    LinearPsiParams p;
    p.family = PsiFamily::Ar1;
    p.rho = {0.6};
    const auto psi = psi_weights(p, 3);
    CHECK(psi[0] == 0.6);
    CHECK(psi[1] == 0.0);
    CHECK(psi[2] == 0.0);
  }
  SUBCASE("ARMA(1,1) matches polynomial long division at 200 lags") {
    LinearPsiParams p;
    p.family = PsiFamily::Arma11;
    p.rho = {0.7, 0.4};
    const auto psi = psi_weights(p, 200);
    const auto ref = oracles::arma11_psi_longdiv(0.7, 0.4, 200);
    double max_diff = 0.0;
    for (int j = 0; j < 200; ++j) max_diff = std::max(max_diff, std::fabs(psi[j] - ref[j]));
    CHECK(max_diff < 1e-10);
  }
  SUBCASE("ARFIMA matches the binomial product form") {
    for (double d : {0.3, -0.2, 0.45}) {
      LinearPsiParams p;
      p.family = PsiFamily::Arfima;
      p.rho = {d};
      const auto psi = psi_weights(p, 50);
      const auto ref = oracles::arfima_psi_product(d, 50);
      for (int j = 0; j < 50; ++j) CHECK(psi[j] == doctest::Approx(ref[j]).epsilon(1e-13));
    }
  }
  SUBCASE("constraint violations are configuration errors") {
    LinearPsiParams p;
    p.family = PsiFamily::Arfima;
    p.rho = {0.7};  // outside (-0.5, 0.5)
    CHECK_THROWS_AS(psi_weights(p, 5), ConfigError);
  }
}

TEST_CASE("linear psi average log-likelihood") {
  const SeriesData data = simulate(ModelSpec::ar1(), Ar1GaussianParams{0.5, 1.3}, 150, 21);
  SUBCASE("AR(1) family containment") {
    LinearPsiParams p;
    p.family = PsiFamily::Ar1;
    p.rho = {0.5};
    p.sigma2 = 1.3;
    CHECK(linear_avg_loglik(p, data) ==
          doctest::Approx(ar1_avg_loglik({0.5, 1.3}, data)).epsilon(1e-12));
  }
  SUBCASE("zero dynamics reduce to the i.i.d. likelihood") {
    LinearPsiParams p;
    p.family = PsiFamily::Ar1;
    p.rho = {0.0};
    p.sigma2 = 2.0;
    double iid = 0.0;
    for (std::size_t t = 1; t < data.y.size(); ++t) {
      iid += oracles::normal_logpdf(data.y[t], 0.0, 2.0);
    }
    iid /= static_cast<double>(data.y.size() - 1);
    CHECK(linear_avg_loglik(p, data) == doctest::Approx(iid).epsilon(1e-12));
  }
  SUBCASE("ARFIMA matches the naive double loop") {
    LinearPsiParams p;
    p.family = PsiFamily::Arfima;
    p.rho = {0.3};
    p.sigma2 = 1.0;
    const SeriesData arf = simulate(ModelSpec::linear_psi(PsiFamily::Arfima), p, 200, 5);
    const auto psi = oracles::arfima_psi_product(0.3, 199);
    CHECK(linear_avg_loglik(p, arf) ==
          doctest::Approx(oracles::naive_linear_loglik(arf.y, psi, 1.0)).epsilon(1e-10));
  }
}

TEST_CASE("hansen skew-t density") {
  SUBCASE("lambda = 0 is symmetric with a = 0, b = 1") {
    const HansenConstants h = hansen_constants(5.0, 0.0);
    CHECK(h.a_h == doctest::Approx(0.0));
    CHECK(h.b_h == doctest::Approx(1.0));
    for (double x : {0.1, 0.77, 2.3, 9.0}) {
      CHECK(skewt_pdf(x, 5.0, 0.0) == doctest::Approx(skewt_pdf(-x, 5.0, 0.0)).epsilon(1e-14));
    }
  }
  SUBCASE("integrates to one") {
    const double mass = oracles::integrate_ref(
        [](double x) { return skewt_pdf(x, 5.0, 0.5); }, -50.0, 50.0, 1e-10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("hansen constant identities hold") {
    const HansenConstants h = hansen_constants(7.0, -0.4);
    CHECK(h.a_h == doctest::Approx(4.0 * -0.4 * h.c_h * 5.0 / 6.0).epsilon(1e-14));
    CHECK(h.b_h * h.b_h == doctest::Approx(1.0 + 3.0 * 0.16 - h.a_h * h.a_h).epsilon(1e-14));
    CHECK(h.b_h > 0.0);
    CHECK(h.c_h > 0.0);
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(skewt_pdf(0.0, 2.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(skewt_pdf(0.0, 5.0, 1.0), std::domain_error);
  }
  SUBCASE("cdf matches integrated density") {
    for (double x : {-1.5, -0.2, 0.4, 2.0}) {
      const double ref = oracles::integrate_ref(
          [](double t) { return skewt_pdf(t, 4.0, 0.3); }, -60.0, x, 1e-10);
      CHECK(skewt_cdf(x, 4.0, 0.3) == doctest::Approx(ref).epsilon(1e-7));
    }
  }
}

TEST_CASE("skew-t AR(1) average log-likelihood") {
  SUBCASE("approaches the Gaussian limit") {
    const SeriesData data = simulate(ModelSpec::ar1(), Ar1GaussianParams{0.0, 1.0}, 200, 3);
    const double skew = skewt_ar1_avg_loglik({0.0, 1e6, 0.0}, data);
    const double gauss = ar1_avg_loglik({0.0, 1.0}, data);
    CHECK(skew == doctest::Approx(gauss).epsilon(1e-3));
  }
  SUBCASE("matches the naive per-term oracle") {
    const SeriesData data =
        simulate(ModelSpec::skewt_ar1(), SkewTAr1Params{0.8, 5.0, 0.5}, 100, 71);
    const double ll = skewt_ar1_avg_loglik({0.8, 5.0, 0.5}, data);
    CHECK(ll == doctest::Approx(oracles::naive_skewt_ar1_loglik(data.y, 0.8, 5.0, 0.5))
                    .epsilon(1e-12));
  }
}

TEST_CASE("mixture forecast density") {
  MixtureParams p;
  p.mu1 = 3.0;
  p.mu0 = 0.0;
  p.sigma2 = 1.0;
  p.p11 = 1.0 - 1e-12;
  p.p10 = 0.4;
  SUBCASE("degenerate mixture is a pure normal ordinate") {
    p.p11 = 1.0;
    CHECK(mixture_forecast_pdf(0.7, p, 1) ==
          doctest::Approx(normal_pdf(0.7, 3.0, 1.0)).epsilon(1e-14));
  }
  SUBCASE("collapsed components ignore the state probabilities") {
    p.mu0 = 3.0;
    const double a = mixture_forecast_pdf(2.5, p, 1);
    p.p11 = 0.17;
    CHECK(mixture_forecast_pdf(2.5, p, 1) == doctest::Approx(a).epsilon(1e-14));
  }
  SUBCASE("integrates to one") {
    p.p11 = 0.6;
    const double mass = oracles::integrate_ref(
        [&](double y) { return mixture_forecast_pdf(y, p, 1); }, -12.0, 15.0, 1e-11);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("HAR average log-likelihood") {
  const SeriesData data = simulate(ModelSpec::har_m1(), synthetic_har_params(), 300, 99);
  SUBCASE("gamma = 0 factorizes into independent blocks") {
    HarParams p = synthetic_har_params();
    p.gamma = 0.0;
    // Independent computation: return block and variance block summed apart.
    const std::size_t T = data.r.size();
    std::vector<double> lv(T);
    for (std::size_t i = 0; i < T; ++i) lv[i] = std::log(data.v[i]);
    double sum = 0.0;
    for (std::size_t i = 22; i < T; ++i) {
      double m5 = 0.0, m22 = 0.0;
      for (std::size_t k = i - 5; k < i; ++k) m5 += lv[k];
      for (std::size_t k = i - 22; k < i; ++k) m22 += lv[k];
      const double beta = p.omega_h + p.phi1 * lv[i - 1] + p.phi2 * m5 / 5.0 + p.phi3 * m22 / 22.0;
      sum += oracles::normal_logpdf(lv[i], beta, p.sigmaV2);
      sum += oracles::normal_logpdf(data.r[i], p.alpha1 + p.alpha2 * data.r[i - 1],
                                    std::exp(beta + 0.5 * p.sigmaV2));
    }
    sum /= static_cast<double>(T - 22);
    CHECK(har_avg_loglik(p, data) == doctest::Approx(sum).epsilon(1e-12));
  }
  SUBCASE("M2 parameters evaluate identically under both code paths") {
    HarParams p = synthetic_har_params();
    p.phi2 = 0.0;
    p.phi3 = 0.0;
    CHECK(har_avg_loglik(p, data) == doctest::Approx(har_m2_avg_loglik(p, data)).epsilon(1e-12));
  }
  SUBCASE("matches the naive recursion oracle") {
    const HarParams p = synthetic_har_params();
    const double ref = oracles::naive_har_loglik(data.r, data.v, p.alpha1, p.alpha2, p.omega_h,
                                                 p.phi1, p.phi2, p.phi3, p.gamma, p.sigmaV2);
    CHECK(har_avg_loglik(p, data) == doctest::Approx(ref).epsilon(1e-10));
  }
  SUBCASE("short series is a data error") {
    SeriesData tiny;
    tiny.kind = SeriesKind::ReturnsVariance;
    tiny.r.assign(23, 0.1);
    tiny.v.assign(23, 0.05);
    CHECK_THROWS_AS(har_avg_loglik(synthetic_har_params(), tiny), DataError);
  }
}

TEST_CASE("mixture average log-likelihood matches naive oracle") {
  MixtureParams p;
  p.mu1 = 3.0;
  p.mu0 = 0.0;
  p.sigma2 = 1.0;
  p.p11 = 0.6;
  p.p10 = 0.4;
  const SeriesData data = simulate(ModelSpec::mixture(), p, 100, 13);
  CHECK(mixture_avg_loglik(p, data) ==
        doctest::Approx(oracles::naive_mixture_loglik(data.y, data.d, 3.0, 0.0, 1.0, 0.6, 0.4))
            .epsilon(1e-12));
}

TEST_CASE("flat parameter layer round-trips and reparameterization") {
  for (const ModelSpec spec :
       {ModelSpec::ar1(), ModelSpec::linear_psi(PsiFamily::Arma11),
        ModelSpec::linear_psi(PsiFamily::Arfima), ModelSpec::skewt_ar1(), ModelSpec::mixture(),
        ModelSpec::har_m1(), ModelSpec::har_m2()}) {
    Eigen::VectorXd theta(param_dim(spec));
    switch (spec.family) {
      case Family::Ar1Gaussian: theta << 0.6, 1.2; break;
      case Family::LinearPsi:
        if (spec.psi_family == PsiFamily::Arma11) {
          theta << 0.5, -0.3, 0.8;
        } else {
          theta << 0.25, 1.1;
        }
        break;
      case Family::SkewTAr1: theta << 0.8, 5.0, 0.5; break;
      case Family::Mixture: theta << 3.0, 0.0, 1.0, 0.6; break;
      case Family::HarM1: theta << 0.05, -0.08, -0.3, 0.38, 0.3, 0.22, -0.15, 0.35; break;
      case Family::HarM2: theta << 0.05, -0.08, -0.3, 0.38, -0.15, 0.35; break;
    }
    CHECK(theta_feasible(spec, theta));
    const Eigen::VectorXd z = theta_to_unconstrained(spec, theta);
    const Eigen::VectorXd back = unconstrained_to_theta(spec, z);
    CHECK((back - theta).lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK(param_names(spec).size() == static_cast<std::size_t>(param_dim(spec)));
  }
}

TEST_CASE("nesting: skew-t collapses to Gaussian AR(1) in the limit") {
  const SeriesData data = simulate(ModelSpec::ar1(), Ar1GaussianParams{0.6, 1.0}, 300, 8);
  const double skew = skewt_ar1_avg_loglik({0.6, 1e6, 0.0}, data);
  const double gauss = ar1_avg_loglik({0.6, 1.0}, data);
  CHECK(skew == doctest::Approx(gauss).epsilon(1e-3));
}
