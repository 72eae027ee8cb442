#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fcs/special.hpp"
#include "oracles.hpp"

using namespace fcs;

TEST_CASE("gammp matches erf for half-integer shape") {
  // P(1/2, x) = erf(sqrt(x))
  for (double x : {0.01, 0.1, 0.5, 1.0, 2.5, 7.0, 20.0}) {
    CHECK(gammp(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
  }
  CHECK(gammp(3.0, 0.0) == 0.0);
}

TEST_CASE("chi2_cdf agrees with closed forms and numeric integration") {
  for (double x : {0.5, 2.0, 5.991464547107979, 11.3}) {
    CHECK(chi2_cdf(x, 2) == doctest::Approx(oracles::chi2_cdf_df2(x)).epsilon(1e-12));
    CHECK(chi2_cdf(x, 3) == doctest::Approx(oracles::chi2_cdf_df3(x)).epsilon(1e-12));
    CHECK(chi2_cdf(x, 4) == doctest::Approx(oracles::chi2_cdf_df4(x)).epsilon(1e-12));
    CHECK(chi2_cdf(x, 5) == doctest::Approx(oracles::chi2_cdf_integral(x, 5)).epsilon(1e-9));
  }
  CHECK(chi2_cdf(3.1, 1) == doctest::Approx(oracles::chi2_cdf_integral(3.1, 1)).epsilon(1e-8));
}

TEST_CASE("normal quantile inverts the CDF to high precision") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(normal_quantile(0.5) == 0.0);
  for (double p : {1e-10, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK_THROWS(normal_quantile(0.0));
  CHECK_THROWS(normal_quantile(1.0));
}

TEST_CASE("normal pdf basics") {
  CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(normal_pdf(1.0, 1.0, 4.0) == doctest::Approx(0.5 * normal_pdf(0.0)).epsilon(1e-15));
  CHECK_THROWS(normal_pdf(0.0, 0.0, -1.0));
}

TEST_CASE("lognormal density closed form at the median") {
  const double beta = -3.044, s2 = 0.3466;
  const double x = std::exp(beta);
  const double expect = 1.0 / (x * std::sqrt(s2) * std::sqrt(2.0 * M_PI));
  CHECK(lognormal_pdf(x, beta, s2) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(lognormal_pdf(-1.0, beta, s2) == 0.0);
}

TEST_CASE("student t CDF matches analytic small-dof forms") {
  // v = 1 is Cauchy; v = 2 has the algebraic form 1/2 + t / (2 sqrt(2 + t^2)).
  for (double t : {-3.0, -0.5, 0.0, 0.25, 1.7, 6.0}) {
    CHECK(student_t_cdf(t, 1.0) == doctest::Approx(0.5 + std::atan(t) / M_PI).epsilon(1e-12));
    CHECK(student_t_cdf(t, 2.0) ==
          doctest::Approx(0.5 + t / (2.0 * std::sqrt(2.0 + t * t))).epsilon(1e-12));
  }
}

TEST_CASE("student t quantile round-trips through the CDF") {
  for (double v : {2.3, 5.0, 30.0}) {
    for (double p : {0.001, 0.05, 0.4, 0.5, 0.85, 0.9999}) {
      CHECK(student_t_cdf(student_t_quantile(p, v), v) == doctest::Approx(p).epsilon(1e-10));
    }
  }
}

TEST_CASE("betai symmetry") {
  for (double x : {0.05, 0.33, 0.71}) {
    CHECK(betai(2.5, 1.25, x) == doctest::Approx(1.0 - betai(1.25, 2.5, 1.0 - x)).epsilon(1e-12));
  }
}
