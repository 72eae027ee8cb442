#include "fcs/models.hpp"

#include <cmath>
#include <stdexcept>

#include "fcs/errors.hpp"
#include "fcs/special.hpp"

namespace fcs {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double atanh_clamped(double x) {
  const double limit = 1.0 - 1e-12;
  if (x > limit) x = limit;
  if (x < -limit) x = -limit;
  return std::atanh(x);
}

double logit(double p) {
  const double limit = 1e-12;
  if (p < limit) p = limit;
  if (p > 1.0 - limit) p = 1.0 - limit;
  return std::log(p / (1.0 - p));
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void require_univariate(const SeriesData& data, const char* who) {
  if (data.kind != SeriesKind::Univariate) {
    throw DataError(std::string(who) + ": expected a univariate series");
  }
}

// Transition counts of the observed state chain over t = 2..T.
struct TransitionCounts {
  int n_from1 = 0, n_1to1 = 0;
  int n_from0 = 0, n_0to1 = 0;
};

TransitionCounts count_transitions(const SeriesData& data) {
  TransitionCounts c;
  for (std::size_t i = 1; i < data.d.size(); ++i) {
    if (data.d[i - 1] == 1) {
      ++c.n_from1;
      if (data.d[i] == 1) ++c.n_1to1;
    } else {
      ++c.n_from0;
      if (data.d[i] == 1) ++c.n_0to1;
    }
  }
  return c;
}

}  // namespace

std::string family_name(const ModelSpec& spec) {
  switch (spec.family) {
    case Family::Ar1Gaussian: return "ar1";
    case Family::LinearPsi:
      switch (spec.psi_family) {
        case PsiFamily::Ar1: return "linear_ar1";
        case PsiFamily::Arma11: return "arma11";
        case PsiFamily::Arfima: return "arfima";
      }
      break;
    case Family::SkewTAr1: return "skewt_ar1";
    case Family::Mixture: return "mixture";
    case Family::HarM1: return "har_m1";
    case Family::HarM2: return "har_m2";
  }
  throw ConfigError("unknown model family");
}

ModelSpec spec_from_name(const std::string& name) {
  if (name == "ar1") return ModelSpec::ar1();
  if (name == "linear_ar1") return ModelSpec::linear_psi(PsiFamily::Ar1);
  if (name == "arma11") return ModelSpec::linear_psi(PsiFamily::Arma11);
  if (name == "arfima") return ModelSpec::linear_psi(PsiFamily::Arfima);
  if (name == "skewt_ar1") return ModelSpec::skewt_ar1();
  if (name == "mixture") return ModelSpec::mixture();
  if (name == "har_m1") return ModelSpec::har_m1();
  if (name == "har_m2") return ModelSpec::har_m2();
  throw ConfigError("unknown model family '" + name + "'");
}

bool LinearPsiParams::feasible() const {
  if (!(sigma2 > 0.0)) return false;
  switch (family) {
    case PsiFamily::Ar1:
      return rho.size() == 1 && std::abs(rho[0]) < 1.0;
    case PsiFamily::Arma11:
      return rho.size() == 2 && std::abs(rho[0]) < 1.0 && std::abs(rho[1]) < 1.0;
    case PsiFamily::Arfima:
      return rho.size() == 1 && rho[0] > -0.5 && rho[0] < 0.5;
  }
  return false;
}

// ---------------------------------------------------------------------------
// AR(1)
// ---------------------------------------------------------------------------

double ar1_avg_loglik(const Ar1GaussianParams& params, const SeriesData& data) {
  require_univariate(data, "ar1_avg_loglik");
  if (!(params.sigma2 > 0.0)) throw std::domain_error("ar1_avg_loglik: sigma2 must be positive");
  const std::size_t T = data.y.size();
  if (T < 2) throw DataError("ar1_avg_loglik: need at least two observations");
  double ss = 0.0;
  for (std::size_t i = 1; i < T; ++i) {
    const double e = data.y[i] - params.alpha1 * data.y[i - 1];
    ss += e * e;
  }
  const double n = static_cast<double>(T - 1);
  return -0.5 * kLog2Pi - 0.5 * std::log(params.sigma2) - ss / (2.0 * n * params.sigma2);
}

// ---------------------------------------------------------------------------
// Linear psi-weight models
// ---------------------------------------------------------------------------

std::vector<double> psi_weights(const LinearPsiParams& params, int max_lag) {
  if (max_lag < 1) throw ConfigError("psi_weights: max_lag must be >= 1");
  if (!params.feasible()) throw ConfigError("psi_weights: parameters violate family constraints");
  std::vector<double> psi(max_lag, 0.0);
  switch (params.family) {
    case PsiFamily::Ar1:
      psi[0] = params.rho[0];
      break;
    case PsiFamily::Arma11: {
      // AR(inf) form of (1 - ar L) Y = (1 + ma L) U:
      // psi_j = (ar + ma) (-ma)^(j-1)
      const double ar = params.rho[0], ma = params.rho[1];
      double pow_ma = 1.0;
      for (int j = 0; j < max_lag; ++j) {
        psi[j] = (ar + ma) * pow_ma;
        pow_ma *= -ma;
      }
      break;
    }
    case PsiFamily::Arfima: {
      // AR(inf) weights of (1-L)^d Y = U: psi_1 = d, psi_j = psi_{j-1}(j-1-d)/j
      const double d = params.rho[0];
      psi[0] = d;
      for (int j = 2; j <= max_lag; ++j) {
        psi[j - 1] = psi[j - 2] * (j - 1.0 - d) / j;
      }
      break;
    }
  }
  return psi;
}

std::vector<double> dpsi_weights(const LinearPsiParams& params, int max_lag, int k) {
  if (k < 0 || k >= static_cast<int>(params.rho.size())) {
    throw ConfigError("dpsi_weights: component out of range");
  }
  std::vector<double> dpsi(max_lag, 0.0);
  switch (params.family) {
    case PsiFamily::Ar1:
      dpsi[0] = 1.0;
      break;
    case PsiFamily::Arma11: {
      const double ar = params.rho[0], ma = params.rho[1];
      if (k == 0) {
        double pow_ma = 1.0;
        for (int j = 0; j < max_lag; ++j) {
          dpsi[j] = pow_ma;
          pow_ma *= -ma;
        }
      } else {
        // d/dma [(ar+ma)(-ma)^(j-1)] = (-ma)^(j-1) - (j-1)(ar+ma)(-ma)^(j-2)
        double pow_prev = 1.0;  // (-ma)^(j-2), defined for j >= 2
        dpsi[0] = 1.0;
        for (int j = 2; j <= max_lag; ++j) {
          const double pow_jm1 = pow_prev * -ma;
          dpsi[j - 1] = pow_jm1 - (j - 1.0) * (ar + ma) * pow_prev;
          pow_prev = pow_jm1;
        }
      }
      break;
    }
    case PsiFamily::Arfima: {
      const double d = params.rho[0];
      const std::vector<double> psi = psi_weights(params, max_lag);
      dpsi[0] = 1.0;
      for (int j = 2; j <= max_lag; ++j) {
        dpsi[j - 1] = (dpsi[j - 2] * (j - 1.0 - d) - psi[j - 2]) / j;
      }
      break;
    }
  }
  return dpsi;
}

double linear_avg_loglik(const LinearPsiParams& params, const SeriesData& data) {
  require_univariate(data, "linear_avg_loglik");
  if (!(params.sigma2 > 0.0)) throw std::domain_error("linear_avg_loglik: sigma2 must be positive");
  const std::size_t T = data.y.size();
  if (T < params.rho.size() + 2) throw DataError("linear_avg_loglik: series too short");
  const std::vector<double> psi = psi_weights(params, static_cast<int>(T) - 1);
  double ss = 0.0;
  for (std::size_t i = 1; i < T; ++i) {
    double mean = 0.0;
    for (std::size_t j = 1; j <= i; ++j) {
      const double w = psi[j - 1];
      if (std::abs(w) < 1e-12) continue;
      mean += w * data.y[i - j];
    }
    const double e = data.y[i] - mean;
    ss += e * e;
  }
  const double n = static_cast<double>(T - 1);
  return -0.5 * kLog2Pi - 0.5 * std::log(params.sigma2) - ss / (2.0 * n * params.sigma2);
}

// ---------------------------------------------------------------------------
// Hansen skew-t
// ---------------------------------------------------------------------------

HansenConstants hansen_constants(double v, double lambda) {
  if (!(v > 2.0)) throw std::domain_error("skewt: degrees of freedom must exceed 2");
  if (!(std::abs(lambda) < 1.0)) throw std::domain_error("skewt: |lambda| must be below 1");
  HansenConstants h;
  h.c_h = std::exp(std::lgamma(0.5 * (v + 1.0)) - std::lgamma(0.5 * v)) /
          std::sqrt(M_PI * (v - 2.0));
  h.a_h = 4.0 * lambda * h.c_h * (v - 2.0) / (v - 1.0);
  h.b_h = std::sqrt(1.0 + 3.0 * lambda * lambda - h.a_h * h.a_h);
  return h;
}

double skewt_log_pdf(double x, double v, double lambda, const HansenConstants& h) {
  const double denom = (x < -h.a_h / h.b_h) ? (1.0 - lambda) : (1.0 + lambda);
  const double z = (h.b_h * x + h.a_h) / denom;
  return std::log(h.b_h * h.c_h) - 0.5 * (v + 1.0) * std::log1p(z * z / (v - 2.0));
}

double skewt_pdf(double x, double v, double lambda) {
  return std::exp(skewt_log_pdf(x, v, lambda, hansen_constants(v, lambda)));
}

double skewt_cdf(double x, double v, double lambda) {
  const HansenConstants h = hansen_constants(v, lambda);
  const double k = std::sqrt(v / (v - 2.0));
  if (x < -h.a_h / h.b_h) {
    return (1.0 - lambda) * student_t_cdf(k * (h.b_h * x + h.a_h) / (1.0 - lambda), v);
  }
  return 0.5 * (1.0 - lambda) +
         (1.0 + lambda) * (student_t_cdf(k * (h.b_h * x + h.a_h) / (1.0 + lambda), v) - 0.5);
}

double skewt_quantile(double p, double v, double lambda) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("skewt_quantile: p must lie in (0,1)");
  const HansenConstants h = hansen_constants(v, lambda);
  const double k = std::sqrt(v / (v - 2.0));
  const double split = 0.5 * (1.0 - lambda);
  if (p < split) {
    const double t = student_t_quantile(p / (1.0 - lambda), v);
    return ((1.0 - lambda) * t / k - h.a_h) / h.b_h;
  }
  const double t = student_t_quantile((p - split) / (1.0 + lambda) + 0.5, v);
  return ((1.0 + lambda) * t / k - h.a_h) / h.b_h;
}

double skewt_ar1_avg_loglik(const SkewTAr1Params& params, const SeriesData& data) {
  require_univariate(data, "skewt_ar1_avg_loglik");
  const std::size_t T = data.y.size();
  if (T < 2) throw DataError("skewt_ar1_avg_loglik: need at least two observations");
  const HansenConstants h = hansen_constants(params.v, params.lambda);
  double sum = 0.0;
  for (std::size_t i = 1; i < T; ++i) {
    sum += skewt_log_pdf(data.y[i] - params.alpha1 * data.y[i - 1], params.v, params.lambda, h);
  }
  return sum / static_cast<double>(T - 1);
}

// ---------------------------------------------------------------------------
// Markov mixture
// ---------------------------------------------------------------------------

double mixture_forecast_pdf(double y, const MixtureParams& params, int d_T) {
  if (!(params.sigma2 > 0.0)) throw std::domain_error("mixture_forecast_pdf: sigma2 must be positive");
  if (d_T != 0 && d_T != 1) throw DataError("mixture_forecast_pdf: state must be 0 or 1");
  const double p1 = (d_T == 1) ? params.p11 : params.p10;
  return p1 * normal_pdf(y, params.mu1, params.sigma2) +
         (1.0 - p1) * normal_pdf(y, params.mu0, params.sigma2);
}

double mixture_avg_loglik(const MixtureParams& params, const SeriesData& data) {
  require_univariate(data, "mixture_avg_loglik");
  if (!data.has_states()) throw DataError("mixture_avg_loglik: observed states required");
  if (!(params.sigma2 > 0.0)) throw std::domain_error("mixture_avg_loglik: sigma2 must be positive");
  const std::size_t T = data.y.size();
  if (T < 2) throw DataError("mixture_avg_loglik: need at least two observations");
  double sum = 0.0;
  for (std::size_t i = 1; i < T; ++i) {
    const double mu = data.d[i] == 1 ? params.mu1 : params.mu0;
    sum += std::log(normal_pdf(data.y[i], mu, params.sigma2));
    const double p = (data.d[i - 1] == 1) ? params.p11 : params.p10;
    sum += std::log(data.d[i] == 1 ? p : 1.0 - p);
  }
  return sum / static_cast<double>(T - 1);
}

// ---------------------------------------------------------------------------
// HAR return / realized-variance model
// ---------------------------------------------------------------------------

HarRecursion har_recursion(const HarParams& params, const SeriesData& data, bool m2_dynamics) {
  if (data.kind != SeriesKind::ReturnsVariance) {
    throw DataError("har: expected a (returns, realized variance) series");
  }
  if (!(params.sigmaV2 > 0.0)) throw std::domain_error("har: sigmaV2 must be positive");
  const std::size_t T = data.r.size();
  if (T < 24) throw DataError("har: need at least 24 observations (22 lags plus recursion start)");
  for (double value : data.v) {
    if (!(value > 0.0)) throw DataError("har: realized variance must be strictly positive");
  }

  std::vector<double> logv(T);
  std::vector<double> prefix(T + 1, 0.0);
  for (std::size_t i = 0; i < T; ++i) {
    logv[i] = std::log(data.v[i]);
    prefix[i + 1] = prefix[i] + logv[i];
  }
  const auto lag_mean = [&](std::size_t i, std::size_t h) {
    return (prefix[i] - prefix[i - h]) / static_cast<double>(h);
  };

  HarRecursion out;
  double u = 0.0;  // u_22 initialized to zero
  double sum = 0.0;
  for (std::size_t i = 22; i < T; ++i) {
    double beta = params.omega_h + params.phi1 * logv[i - 1] + params.gamma * u;
    if (!m2_dynamics) {
      beta += params.phi2 * lag_mean(i, 5) + params.phi3 * lag_mean(i, 22);
    }
    const double mu = params.alpha1 + params.alpha2 * data.r[i - 1];
    const double sigma2 = std::exp(beta + 0.5 * params.sigmaV2);
    const double er = data.r[i] - mu;
    sum += -0.5 * kLog2Pi - 0.5 * (beta + 0.5 * params.sigmaV2) - 0.5 * er * er / sigma2;
    const double ev = logv[i] - beta;
    sum += -0.5 * kLog2Pi - 0.5 * std::log(params.sigmaV2) - 0.5 * ev * ev / params.sigmaV2;
    u = er / std::sqrt(sigma2);
  }
  out.u_last = u;
  out.effective_T = static_cast<int>(T) - 22;
  out.avg_loglik = sum / out.effective_T;
  out.mu_next = params.alpha1 + params.alpha2 * data.r[T - 1];
  out.beta_next = params.omega_h + params.phi1 * logv[T - 1] + params.gamma * u;
  if (!m2_dynamics) {
    out.beta_next += params.phi2 * lag_mean(T, 5) + params.phi3 * lag_mean(T, 22);
  }
  return out;
}

double har_avg_loglik(const HarParams& params, const SeriesData& data) {
  return har_recursion(params, data, false).avg_loglik;
}

double har_m2_avg_loglik(const HarParams& params, const SeriesData& data) {
  return har_recursion(params, data, true).avg_loglik;
}

// ---------------------------------------------------------------------------
// Flat parameter layer
// ---------------------------------------------------------------------------

int param_dim(const ModelSpec& spec) {
  switch (spec.family) {
    case Family::Ar1Gaussian: return 2;
    case Family::LinearPsi: return spec.psi_family == PsiFamily::Arma11 ? 3 : 2;
    case Family::SkewTAr1: return 3;
    case Family::Mixture: return 4;
    case Family::HarM1: return 8;
    case Family::HarM2: return 6;
  }
  throw ConfigError("unknown model family");
}

std::vector<std::string> param_names(const ModelSpec& spec) {
  switch (spec.family) {
    case Family::Ar1Gaussian: return {"alpha1", "sigma2"};
    case Family::LinearPsi:
      switch (spec.psi_family) {
        case PsiFamily::Ar1: return {"ar", "sigma2"};
        case PsiFamily::Arma11: return {"ar", "ma", "sigma2"};
        case PsiFamily::Arfima: return {"d", "sigma2"};
      }
      break;
    case Family::SkewTAr1: return {"alpha1", "v", "lambda"};
    case Family::Mixture: return {"mu1", "mu0", "sigma2", "p1"};
    case Family::HarM1:
      return {"alpha1", "alpha2", "omega", "phi1", "phi2", "phi3", "gamma", "sigmaV2"};
    case Family::HarM2: return {"alpha1", "alpha2", "omega", "phi1", "gamma", "sigmaV2"};
  }
  throw ConfigError("unknown model family");
}

namespace {

LinearPsiParams linear_from_theta(const ModelSpec& spec, const Eigen::VectorXd& theta) {
  LinearPsiParams p;
  p.family = spec.psi_family;
  const int k = param_dim(spec) - 1;
  p.rho.assign(theta.data(), theta.data() + k);
  p.sigma2 = theta(k);
  return p;
}

HarParams har_from_theta(const ModelSpec& spec, const Eigen::VectorXd& theta) {
  HarParams p;
  p.alpha1 = theta(0);
  p.alpha2 = theta(1);
  p.omega_h = theta(2);
  p.phi1 = theta(3);
  if (spec.family == Family::HarM1) {
    p.phi2 = theta(4);
    p.phi3 = theta(5);
    p.gamma = theta(6);
    p.sigmaV2 = theta(7);
  } else {
    p.gamma = theta(4);
    p.sigmaV2 = theta(5);
  }
  return p;
}

}  // namespace

bool theta_feasible(const ModelSpec& spec, const Eigen::VectorXd& theta) {
  if (theta.size() != param_dim(spec)) return false;
  switch (spec.family) {
    case Family::Ar1Gaussian:
      return Ar1GaussianParams{theta(0), theta(1)}.feasible();
    case Family::LinearPsi:
      return linear_from_theta(spec, theta).feasible();
    case Family::SkewTAr1:
      return SkewTAr1Params{theta(0), theta(1), theta(2)}.feasible();
    case Family::Mixture:
      return theta(2) > 0.0 && theta(3) > 0.0 && theta(3) < 1.0;
    case Family::HarM1:
    case Family::HarM2:
      return har_from_theta(spec, theta).feasible();
  }
  return false;
}

double avg_loglik(const ModelSpec& spec, const Eigen::VectorXd& theta, const SeriesData& data) {
  if (theta.size() != param_dim(spec)) throw ConfigError("avg_loglik: dimension mismatch");
  switch (spec.family) {
    case Family::Ar1Gaussian:
      return ar1_avg_loglik(Ar1GaussianParams{theta(0), theta(1)}, data);
    case Family::LinearPsi:
      return linear_avg_loglik(linear_from_theta(spec, theta), data);
    case Family::SkewTAr1:
      return skewt_ar1_avg_loglik(SkewTAr1Params{theta(0), theta(1), theta(2)}, data);
    case Family::Mixture: {
      if (!data.has_states()) throw DataError("avg_loglik: mixture requires observed states");
      const TransitionCounts c = count_transitions(data);
      MixtureParams p;
      p.mu1 = theta(0);
      p.mu0 = theta(1);
      p.sigma2 = theta(2);
      const int d_T = data.d.back();
      const double p11_hat = c.n_from1 > 0 ? static_cast<double>(c.n_1to1) / c.n_from1 : 0.5;
      const double p10_hat = c.n_from0 > 0 ? static_cast<double>(c.n_0to1) / c.n_from0 : 0.5;
      if (d_T == 1) {
        p.p11 = theta(3);
        p.p10 = p10_hat;
      } else {
        p.p10 = theta(3);
        p.p11 = p11_hat;
      }
      return mixture_avg_loglik(p, data);
    }
    case Family::HarM1:
      return har_avg_loglik(har_from_theta(spec, theta), data);
    case Family::HarM2:
      return har_m2_avg_loglik(har_from_theta(spec, theta), data);
  }
  throw ConfigError("unknown model family");
}

int effective_sample_size(const ModelSpec& spec, const SeriesData& data) {
  const int T = static_cast<int>(data.size());
  if (spec.family == Family::HarM1 || spec.family == Family::HarM2) return T - 22;
  return T - 1;
}

Eigen::VectorXd theta_to_unconstrained(const ModelSpec& spec, const Eigen::VectorXd& theta) {
  Eigen::VectorXd z = theta;
  switch (spec.family) {
    case Family::Ar1Gaussian:
      z(0) = atanh_clamped(theta(0));
      z(1) = std::log(theta(1));
      break;
    case Family::LinearPsi:
      switch (spec.psi_family) {
        case PsiFamily::Ar1:
          z(0) = atanh_clamped(theta(0));
          z(1) = std::log(theta(1));
          break;
        case PsiFamily::Arma11:
          z(0) = atanh_clamped(theta(0));
          z(1) = atanh_clamped(theta(1));
          z(2) = std::log(theta(2));
          break;
        case PsiFamily::Arfima:
          z(0) = atanh_clamped(2.0 * theta(0));
          z(1) = std::log(theta(1));
          break;
      }
      break;
    case Family::SkewTAr1:
      z(0) = atanh_clamped(theta(0));
      z(1) = std::log(theta(1) - 2.0);
      z(2) = atanh_clamped(theta(2));
      break;
    case Family::Mixture:
      z(2) = std::log(theta(2));
      z(3) = logit(theta(3));
      break;
    case Family::HarM1:
      z(1) = atanh_clamped(theta(1));
      z(7) = std::log(theta(7));
      break;
    case Family::HarM2:
      z(1) = atanh_clamped(theta(1));
      z(5) = std::log(theta(5));
      break;
  }
  return z;
}

Eigen::VectorXd unconstrained_to_theta(const ModelSpec& spec, const Eigen::VectorXd& z) {
  Eigen::VectorXd theta = z;
  switch (spec.family) {
    case Family::Ar1Gaussian:
      theta(0) = std::tanh(z(0));
      theta(1) = std::exp(z(1));
      break;
    case Family::LinearPsi:
      switch (spec.psi_family) {
        case PsiFamily::Ar1:
          theta(0) = std::tanh(z(0));
          theta(1) = std::exp(z(1));
          break;
        case PsiFamily::Arma11:
          theta(0) = std::tanh(z(0));
          theta(1) = std::tanh(z(1));
          theta(2) = std::exp(z(2));
          break;
        case PsiFamily::Arfima:
          theta(0) = 0.5 * std::tanh(z(0));
          theta(1) = std::exp(z(1));
          break;
      }
      break;
    case Family::SkewTAr1:
      theta(0) = std::tanh(z(0));
      theta(1) = 2.0 + std::exp(z(1));
      theta(2) = std::tanh(z(2));
      break;
    case Family::Mixture:
      theta(2) = std::exp(z(2));
      theta(3) = logistic(z(3));
      break;
    case Family::HarM1:
      theta(1) = std::tanh(z(1));
      theta(7) = std::exp(z(7));
      break;
    case Family::HarM2:
      theta(1) = std::tanh(z(1));
      theta(5) = std::exp(z(5));
      break;
  }
  return theta;
}

Eigen::VectorXd params_to_theta(const ModelSpec& spec, const ModelParams& params,
                                const SeriesData& data) {
  Eigen::VectorXd theta(param_dim(spec));
  switch (spec.family) {
    case Family::Ar1Gaussian: {
      const auto& p = std::get<Ar1GaussianParams>(params);
      theta << p.alpha1, p.sigma2;
      break;
    }
    case Family::LinearPsi: {
      const auto& p = std::get<LinearPsiParams>(params);
      for (std::size_t k = 0; k < p.rho.size(); ++k) theta(static_cast<int>(k)) = p.rho[k];
      theta(param_dim(spec) - 1) = p.sigma2;
      break;
    }
    case Family::SkewTAr1: {
      const auto& p = std::get<SkewTAr1Params>(params);
      theta << p.alpha1, p.v, p.lambda;
      break;
    }
    case Family::Mixture: {
      const auto& p = std::get<MixtureParams>(params);
      if (!data.has_states()) throw DataError("params_to_theta: mixture requires states");
      const double p1 = data.d.back() == 1 ? p.p11 : p.p10;
      theta << p.mu1, p.mu0, p.sigma2, p1;
      break;
    }
    case Family::HarM1: {
      const auto& p = std::get<HarParams>(params);
      theta << p.alpha1, p.alpha2, p.omega_h, p.phi1, p.phi2, p.phi3, p.gamma, p.sigmaV2;
      break;
    }
    case Family::HarM2: {
      const auto& p = std::get<HarParams>(params);
      theta << p.alpha1, p.alpha2, p.omega_h, p.phi1, p.gamma, p.sigmaV2;
      break;
    }
  }
  return theta;
}

ModelParams theta_to_params(const ModelSpec& spec, const Eigen::VectorXd& theta) {
  switch (spec.family) {
    case Family::Ar1Gaussian:
      return Ar1GaussianParams{theta(0), theta(1)};
    case Family::LinearPsi:
      return linear_from_theta(spec, theta);
    case Family::SkewTAr1:
      return SkewTAr1Params{theta(0), theta(1), theta(2)};
    case Family::Mixture: {
      // Both transition rows are set to the Wald-relevant probability; the
      // conditioning state selects between them downstream, so forecasts are
      // unaffected.
      MixtureParams p;
      p.mu1 = theta(0);
      p.mu0 = theta(1);
      p.sigma2 = theta(2);
      p.p11 = theta(3);
      p.p10 = theta(3);
      return p;
    }
    case Family::HarM1:
    case Family::HarM2:
      return har_from_theta(spec, theta);
  }
  throw ConfigError("unknown model family");
}

}  // namespace fcs
