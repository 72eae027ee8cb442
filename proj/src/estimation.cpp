#include "fcs/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "fcs/errors.hpp"
#include "fcs/optim.hpp"
#include "fcs/rng.hpp"

namespace fcs {

namespace {

double lag1_autocorr(const std::vector<double>& y) {
  const std::size_t T = y.size();
  double mean = 0.0;
  for (double value : y) mean += value;
  mean /= static_cast<double>(T);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const double c = y[i] - mean;
    den += c * c;
    if (i > 0) num += c * (y[i - 1] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

double clamp_ar(double x) { return std::clamp(x, -0.95, 0.95); }

double residual_variance_ar1(const std::vector<double>& y, double coef) {
  double ss = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    const double e = y[i] - coef * y[i - 1];
    ss += e * e;
  }
  const double out = ss / static_cast<double>(y.size() - 1);
  return out > 0.0 ? out : 1e-8;
}

Eigen::VectorXd ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return x.colPivHouseholderQr().solve(y);
}

Eigen::VectorXd har_start(const ModelSpec& spec, const SeriesData& data) {
  const bool m2 = spec.family == Family::HarM2;
  const std::size_t T = data.r.size();
  if (T < 30) throw DataError("start_theta: HAR series too short");
  std::vector<double> logv(T);
  std::vector<double> prefix(T + 1, 0.0);
  for (std::size_t i = 0; i < T; ++i) {
    logv[i] = std::log(data.v[i]);
    prefix[i + 1] = prefix[i] + logv[i];
  }
  const auto lag_mean = [&](std::size_t i, std::size_t h) {
    return (prefix[i] - prefix[i - h]) / static_cast<double>(h);
  };

  const int rows = static_cast<int>(T) - 22;
  const int k = m2 ? 2 : 4;
  Eigen::MatrixXd xv(rows, k);
  Eigen::VectorXd yv(rows);
  Eigen::MatrixXd xr(rows, 2);
  Eigen::VectorXd yr(rows);
  for (int row = 0; row < rows; ++row) {
    const std::size_t i = static_cast<std::size_t>(row) + 22;
    xv(row, 0) = 1.0;
    xv(row, 1) = logv[i - 1];
    if (!m2) {
      xv(row, 2) = lag_mean(i, 5);
      xv(row, 3) = lag_mean(i, 22);
    }
    yv(row) = logv[i];
    xr(row, 0) = 1.0;
    xr(row, 1) = data.r[i - 1];
    yr(row) = data.r[i];
  }
  const Eigen::VectorXd bv = ols(xv, yv);
  const Eigen::VectorXd br = ols(xr, yr);
  const double sv2 = std::max((yv - xv * bv).squaredNorm() / rows, 1e-8);

  Eigen::VectorXd theta(param_dim(spec));
  if (m2) {
    theta << br(0), clamp_ar(br(1)), bv(0), bv(1), 0.0, sv2;
  } else {
    theta << br(0), clamp_ar(br(1)), bv(0), bv(1), bv(2), bv(3), 0.0, sv2;
  }
  return theta;
}

}  // namespace

Eigen::VectorXd start_theta(const ModelSpec& spec, const SeriesData& data) {
  switch (spec.family) {
    case Family::Ar1Gaussian: {
      const double a = clamp_ar(lag1_autocorr(data.y));
      Eigen::VectorXd theta(2);
      theta << a, residual_variance_ar1(data.y, a);
      return theta;
    }
    case Family::LinearPsi: {
      const double r1 = lag1_autocorr(data.y);
      switch (spec.psi_family) {
        case PsiFamily::Ar1: {
          Eigen::VectorXd theta(2);
          const double a = clamp_ar(r1);
          theta << a, residual_variance_ar1(data.y, a);
          return theta;
        }
        case PsiFamily::Arma11: {
          Eigen::VectorXd theta(3);
          const double a = clamp_ar(r1);
          theta << a, 0.0, residual_variance_ar1(data.y, a);
          return theta;
        }
        case PsiFamily::Arfima: {
          Eigen::VectorXd theta(2);
          theta << std::clamp(r1, -0.4, 0.4), residual_variance_ar1(data.y, 0.0);
          return theta;
        }
      }
      break;
    }
    case Family::SkewTAr1: {
      Eigen::VectorXd theta(3);
      theta << clamp_ar(lag1_autocorr(data.y)), 8.0, 0.0;
      return theta;
    }
    case Family::Mixture:
      return mixture_mle(data).theta_hat;
    case Family::HarM1:
    case Family::HarM2:
      return har_start(spec, data);
  }
  throw ConfigError("start_theta: unknown model family");
}

FittedModel ar1_mle(const SeriesData& data) {
  if (data.kind != SeriesKind::Univariate) throw DataError("ar1_mle: expected univariate data");
  const std::vector<double>& y = data.y;
  const std::size_t T = y.size();
  if (T < 3) throw DataError("ar1_mle: need at least three observations");

  const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
  if (*min_it == *max_it) {
    throw EstimationError("ar1_mle: degenerate regressor (constant series)");
  }

  double syy = 0.0, sxy = 0.0;
  for (std::size_t i = 1; i < T; ++i) {
    syy += y[i - 1] * y[i - 1];
    sxy += y[i] * y[i - 1];
  }
  if (!(syy > 0.0)) throw EstimationError("ar1_mle: degenerate regressor (zero lagged sum)");
  const double alpha = sxy / syy;
  double ss = 0.0;
  for (std::size_t i = 1; i < T; ++i) {
    const double e = y[i] - alpha * y[i - 1];
    ss += e * e;
  }
  const double n = static_cast<double>(T - 1);
  const double sigma2 = ss / n;

  FittedModel fit;
  fit.spec = ModelSpec::ar1();
  fit.theta_hat = Eigen::Vector2d(alpha, sigma2);
  fit.data = std::make_shared<SeriesData>(data);
  fit.effective_T = static_cast<int>(T) - 1;
  if (!(sigma2 > 0.0) || std::abs(alpha) >= 1.0) {
    fit.degenerate = true;
    fit.vinv_hat = Eigen::Matrix2d::Zero();
    fit.loglik_at_max = std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.vinv_hat = Eigen::Matrix2d::Zero();
  fit.vinv_hat(0, 0) = syy / (n * sigma2);
  fit.vinv_hat(1, 1) = 1.0 / (2.0 * sigma2 * sigma2);
  fit.loglik_at_max = ar1_avg_loglik(Ar1GaussianParams{alpha, sigma2}, data);
  return fit;
}

FittedModel mixture_mle(const SeriesData& data) {
  if (data.kind != SeriesKind::Univariate || !data.has_states()) {
    throw DataError("mixture_mle: univariate data with observed states required");
  }
  const std::size_t T = data.y.size();
  if (T < 3) throw DataError("mixture_mle: need at least three observations");

  double sum1 = 0.0, sum0 = 0.0;
  int n1 = 0, n0 = 0;
  int n_from1 = 0, n_1to1 = 0, n_from0 = 0, n_0to1 = 0;
  for (std::size_t i = 1; i < T; ++i) {
    if (data.d[i] == 1) {
      sum1 += data.y[i];
      ++n1;
    } else {
      sum0 += data.y[i];
      ++n0;
    }
    if (data.d[i - 1] == 1) {
      ++n_from1;
      if (data.d[i] == 1) ++n_1to1;
    } else {
      ++n_from0;
      if (data.d[i] == 1) ++n_0to1;
    }
  }
  if (n1 == 0 || n0 == 0) throw EstimationError("mixture_mle: a state never occurs");
  if (n_from1 == 0 || n_from0 == 0) {
    throw EstimationError("mixture_mle: no transitions out of one state");
  }
  const double mu1 = sum1 / n1;
  const double mu0 = sum0 / n0;
  const double p11 = static_cast<double>(n_1to1) / n_from1;
  const double p10 = static_cast<double>(n_0to1) / n_from0;
  if (p11 <= 0.0 || p11 >= 1.0 || p10 <= 0.0 || p10 >= 1.0) {
    throw EstimationError("mixture_mle: transition probability on the boundary");
  }
  double ss = 0.0;
  for (std::size_t i = 1; i < T; ++i) {
    const double e = data.y[i] - (data.d[i] == 1 ? mu1 : mu0);
    ss += e * e;
  }
  const double sigma2 = ss / static_cast<double>(T - 1);
  if (!(sigma2 > 0.0)) throw EstimationError("mixture_mle: zero residual variance");

  FittedModel fit;
  fit.spec = ModelSpec::mixture();
  fit.theta_hat = Eigen::Vector4d(mu1, mu0, sigma2, data.d.back() == 1 ? p11 : p10);
  fit.data = std::make_shared<SeriesData>(data);
  fit.effective_T = static_cast<int>(T) - 1;
  fit.vinv_hat = information_matrix(fit.spec, fit.theta_hat, data, &fit.vinv_repaired);
  fit.loglik_at_max = avg_loglik(fit.spec, fit.theta_hat, data);
  return fit;
}

Eigen::MatrixXd nearest_pd(const Eigen::MatrixXd& m, double eig_floor, bool* repaired) {
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd evals = es.eigenvalues();
  bool fixed = false;
  for (int i = 0; i < evals.size(); ++i) {
    if (evals(i) < eig_floor) {
      evals(i) = eig_floor;
      fixed = true;
    }
  }
  if (repaired) *repaired = fixed;
  if (!fixed) return sym;
  return es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd information_matrix_numeric(const ModelSpec& spec, const Eigen::VectorXd& theta_hat,
                                           const SeriesData& data, bool* repaired) {
  const ObjectiveFn ll = [&](const Eigen::VectorXd& t) { return avg_loglik(spec, t, data); };
  const Eigen::MatrixXd hess = numerical_hessian(ll, theta_hat);
  return nearest_pd(-hess, 1e-10, repaired);
}

Eigen::MatrixXd information_matrix(const ModelSpec& spec, const Eigen::VectorXd& theta_hat,
                                   const SeriesData& data, bool* repaired) {
  if (repaired) *repaired = false;
  switch (spec.family) {
    case Family::Ar1Gaussian: {
      const double sigma2 = theta_hat(1);
      if (!(sigma2 > 0.0)) throw std::domain_error("information_matrix: sigma2 must be positive");
      double syy = 0.0;
      for (std::size_t i = 1; i < data.y.size(); ++i) syy += data.y[i - 1] * data.y[i - 1];
      const double n = static_cast<double>(data.y.size() - 1);
      Eigen::Matrix2d info = Eigen::Matrix2d::Zero();
      info(0, 0) = syy / (n * sigma2);
      info(1, 1) = 1.0 / (2.0 * sigma2 * sigma2);
      return info;
    }
    case Family::LinearPsi: {
      LinearPsiParams p;
      p.family = spec.psi_family;
      const int k = param_dim(spec) - 1;
      p.rho.assign(theta_hat.data(), theta_hat.data() + k);
      p.sigma2 = theta_hat(k);
      if (!(p.sigma2 > 0.0)) throw std::domain_error("information_matrix: sigma2 must be positive");
      const std::size_t T = data.y.size();
      std::vector<std::vector<double>> dpsi(k);
      for (int c = 0; c < k; ++c) dpsi[c] = dpsi_weights(p, static_cast<int>(T) - 1, c);
      Eigen::MatrixXd zz = Eigen::MatrixXd::Zero(k, k);
      Eigen::VectorXd z(k);
      for (std::size_t i = 1; i < T; ++i) {
        for (int c = 0; c < k; ++c) {
          double acc = 0.0;
          for (std::size_t j = 1; j <= i; ++j) acc += dpsi[c][j - 1] * data.y[i - j];
          z(c) = acc;
        }
        zz += z * z.transpose();
      }
      const double n = static_cast<double>(T - 1);
      Eigen::MatrixXd info = Eigen::MatrixXd::Zero(k + 1, k + 1);
      info.topLeftCorner(k, k) = zz / (n * p.sigma2);
      info(k, k) = 1.0 / (2.0 * p.sigma2 * p.sigma2);
      return info;
    }
    default:
      return information_matrix_numeric(spec, theta_hat, data, repaired);
  }
}

FittedModel mle_fit(const ModelSpec& spec, const SeriesData& data, const OptimizerConfig& cfg) {
  data.validate();
  if (spec.family == Family::Ar1Gaussian) {
    FittedModel fit = ar1_mle(data);
    if (fit.degenerate) throw EstimationError("mle_fit: degenerate AR(1) fit");
    return fit;
  }
  if (spec.family == Family::Mixture) return mixture_mle(data);

  const ObjectiveFn objective = [&](const Eigen::VectorXd& z) {
    const Eigen::VectorXd theta = unconstrained_to_theta(spec, z);
    const double ll = avg_loglik(spec, theta, data);
    return std::isfinite(ll) ? -ll : 1e12;
  };

  const Eigen::VectorXd z0 = theta_to_unconstrained(spec, start_theta(spec, data));
  Eigen::VectorXd best_z = z0;
  double best_f = objective(z0);
  bool ok = false;
  for (int attempt = 0; attempt <= cfg.restarts && !ok; ++attempt) {
    Eigen::VectorXd z_init = best_z;
    if (attempt > 0) {
      CounterRng jitter(17, static_cast<std::uint64_t>(attempt));
      for (int i = 0; i < z_init.size(); ++i) {
        z_init(i) += 0.2 * (jitter.next_uniform() - 0.5) * std::max(1.0, std::abs(z_init(i)));
      }
    }
    OptimResult res;
    if (cfg.method == OptimizerConfig::Method::Simplex) {
      res = nelder_mead(objective, z_init, cfg.max_iters, cfg.f_tol, cfg.x_tol);
      res = bfgs(objective, res.x, 300, 0.5 * cfg.grad_tol);
    } else {
      res = bfgs(objective, z_init, cfg.max_iters, 0.5 * cfg.grad_tol);
      if (!res.converged) {
        res = nelder_mead(objective, res.x, cfg.max_iters, cfg.f_tol, cfg.x_tol);
        res = bfgs(objective, res.x, 300, 0.5 * cfg.grad_tol);
      }
    }
    if (res.f < best_f) {
      best_f = res.f;
      best_z = res.x;
    }
    const Eigen::VectorXd g = numerical_gradient(objective, best_z);
    ok = g.lpNorm<Eigen::Infinity>() < cfg.grad_tol;
  }
  const Eigen::VectorXd theta = unconstrained_to_theta(spec, best_z);
  if (!ok) {
    throw EstimationError("mle_fit: optimizer did not reach gradient tolerance",
                          std::vector<double>(theta.data(), theta.data() + theta.size()),
                          -best_f);
  }

  FittedModel fit;
  fit.spec = spec;
  fit.theta_hat = theta;
  fit.data = std::make_shared<SeriesData>(data);
  fit.effective_T = effective_sample_size(spec, data);
  fit.vinv_hat = information_matrix(spec, theta, data, &fit.vinv_repaired);
  fit.loglik_at_max = -best_f;
  return fit;
}

}  // namespace fcs
