#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "fcs/series.hpp"

namespace fcs {

enum class Family { Ar1Gaussian, LinearPsi, SkewTAr1, Mixture, HarM1, HarM2 };
enum class PsiFamily { Ar1, Arma11, Arfima };

/// Model family tag; psi_family selects the dynamics inside LinearPsi.
struct ModelSpec {
  Family family = Family::Ar1Gaussian;
  PsiFamily psi_family = PsiFamily::Ar1;

  static ModelSpec ar1() { return {Family::Ar1Gaussian, PsiFamily::Ar1}; }
  static ModelSpec linear_psi(PsiFamily f) { return {Family::LinearPsi, f}; }
  static ModelSpec skewt_ar1() { return {Family::SkewTAr1, PsiFamily::Ar1}; }
  static ModelSpec mixture() { return {Family::Mixture, PsiFamily::Ar1}; }
  static ModelSpec har_m1() { return {Family::HarM1, PsiFamily::Ar1}; }
  static ModelSpec har_m2() { return {Family::HarM2, PsiFamily::Ar1}; }

  bool operator==(const ModelSpec& o) const {
    return family == o.family && (family != Family::LinearPsi || psi_family == o.psi_family);
  }
};

std::string family_name(const ModelSpec& spec);
ModelSpec spec_from_name(const std::string& name);

// ---------------------------------------------------------------------------
// Parameter types
// ---------------------------------------------------------------------------

/// Stationary Gaussian AR(1): Y_t = alpha1 Y_{t-1} + U_t, U_t ~ N(0, sigma2).
struct Ar1GaussianParams {
  double alpha1 = 0.0;
  double sigma2 = 1.0;
  bool feasible() const { return std::abs(alpha1) < 1.0 && sigma2 > 0.0; }
};

/// Gaussian linear process Y_t | past ~ N(sum_j psi_j(rho) Y_{t-j}, sigma2).
struct LinearPsiParams {
  std::vector<double> rho;  // AR1: {ar}; ARMA11: {ar, ma}; ARFIMA: {d}
  double sigma2 = 1.0;
  PsiFamily family = PsiFamily::Ar1;
  bool feasible() const;
};

/// AR(1) with Hansen skew-t innovations (standardized to mean 0, variance 1).
struct SkewTAr1Params {
  double alpha1 = 0.0;
  double v = 5.0;
  double lambda = 0.0;
  bool feasible() const { return std::abs(alpha1) < 1.0 && v > 2.0 && std::abs(lambda) < 1.0; }
};

/// Constants of the Hansen skew-t density. The _h suffix keeps them apart
/// from the AR(1) ellipse semi-axes a and b used elsewhere.
struct HansenConstants {
  double a_h = 0.0;
  double b_h = 1.0;
  double c_h = 0.0;
};

HansenConstants hansen_constants(double v, double lambda);

/// Two-state Gaussian mixture driven by an observed Markov chain.
struct MixtureParams {
  double mu1 = 0.0;
  double mu0 = 0.0;
  double sigma2 = 1.0;
  double p11 = 0.5;  // pr(d_t = 1 | d_{t-1} = 1)
  double p10 = 0.5;  // pr(d_t = 1 | d_{t-1} = 0)
  bool feasible() const {
    return sigma2 > 0.0 && p11 > 0.0 && p11 < 1.0 && p10 > 0.0 && p10 < 1.0;
  }
};

/// Bivariate return / log realized-variance model with a HAR volatility
/// recursion. omega_h avoids a clash with the Wald statistic omega.
struct HarParams {
  double alpha1 = 0.0;  // return intercept
  double alpha2 = 0.0;  // return AR coefficient, |alpha2| < 1
  double omega_h = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;  // structurally zero under M2
  double phi3 = 0.0;  // structurally zero under M2
  double gamma = 0.0;
  double sigmaV2 = 1.0;
  bool feasible() const { return std::abs(alpha2) < 1.0 && sigmaV2 > 0.0; }
};

using ModelParams =
    std::variant<Ar1GaussianParams, LinearPsiParams, SkewTAr1Params, MixtureParams, HarParams>;

// ---------------------------------------------------------------------------
// Densities and average log-likelihoods
//
// Every likelihood conditions on the first observation (first 22 for HAR) and
// averages over the remaining terms, so effective sample sizes are T-1 and
// T-22 respectively.
// ---------------------------------------------------------------------------

double ar1_avg_loglik(const Ar1GaussianParams& params, const SeriesData& data);

/// AR(inf) weights psi_1..psi_max_lag of the conditional mean
/// sum_j psi_j y_{t-j} for the selected family.
std::vector<double> psi_weights(const LinearPsiParams& params, int max_lag);

/// d psi_j / d rho_k, same indexing as psi_weights.
std::vector<double> dpsi_weights(const LinearPsiParams& params, int max_lag, int k);

double linear_avg_loglik(const LinearPsiParams& params, const SeriesData& data);

double skewt_pdf(double x, double v, double lambda);
double skewt_log_pdf(double x, double v, double lambda, const HansenConstants& h);
double skewt_cdf(double x, double v, double lambda);
double skewt_quantile(double p, double v, double lambda);

double skewt_ar1_avg_loglik(const SkewTAr1Params& params, const SeriesData& data);

/// One-step mixture forecast density with the state probability selected by
/// the conditioning state d_T.
double mixture_forecast_pdf(double y, const MixtureParams& params, int d_T);

/// Full-parameter average log-likelihood (observation and transition terms).
double mixture_avg_loglik(const MixtureParams& params, const SeriesData& data);

double har_avg_loglik(const HarParams& params, const SeriesData& data);

/// Restricted recursion of Eqs M2: beta_t drops the weekly and monthly
/// averages. Same conditioning window as the general model so that the two
/// likelihoods are directly comparable.
double har_m2_avg_loglik(const HarParams& params, const SeriesData& data);

/// Standardized return innovations and one-step-ahead conditional moments of
/// the HAR recursion evaluated at fixed parameters.
struct HarRecursion {
  double mu_next = 0.0;    // mu_{T+1}
  double beta_next = 0.0;  // beta_{T+1}
  double u_last = 0.0;     // u_T
  double avg_loglik = 0.0;
  int effective_T = 0;
};
HarRecursion har_recursion(const HarParams& params, const SeriesData& data, bool m2_dynamics);

// ---------------------------------------------------------------------------
// Flat parameter vectors (Wald/optimizer layer)
//
// Layouts: ar1 (alpha1, sigma2); linear-psi (rho..., sigma2);
// skew-t (alpha1, v, lambda); mixture (mu1, mu0, sigma2, p1) where p1 is the
// transition probability out of the observed terminal state; HAR M1
// (alpha1, alpha2, omega, phi1, phi2, phi3, gamma, sigmaV2); HAR M2 drops
// phi2 and phi3.
// ---------------------------------------------------------------------------

int param_dim(const ModelSpec& spec);
std::vector<std::string> param_names(const ModelSpec& spec);

bool theta_feasible(const ModelSpec& spec, const Eigen::VectorXd& theta);

/// Average log-likelihood on the flat layout. For the mixture this is the
/// 4-parameter profile: the transition probability for the state opposite to
/// d_T is held at its maximum-likelihood value.
double avg_loglik(const ModelSpec& spec, const Eigen::VectorXd& theta, const SeriesData& data);

int effective_sample_size(const ModelSpec& spec, const SeriesData& data);

/// Smooth reparameterization to unconstrained coordinates.
Eigen::VectorXd theta_to_unconstrained(const ModelSpec& spec, const Eigen::VectorXd& theta);
Eigen::VectorXd unconstrained_to_theta(const ModelSpec& spec, const Eigen::VectorXd& z);

/// Typed params -> flat vector. For the mixture the terminal state of `data`
/// selects which transition probability enters the Wald vector.
Eigen::VectorXd params_to_theta(const ModelSpec& spec, const ModelParams& params,
                                const SeriesData& data);
ModelParams theta_to_params(const ModelSpec& spec, const Eigen::VectorXd& theta);

}  // namespace fcs
