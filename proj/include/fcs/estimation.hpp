#pragma once

#include <Eigen/Dense>
#include <memory>

#include "fcs/models.hpp"
#include "fcs/series.hpp"

namespace fcs {

struct OptimizerConfig {
  enum class Method { Simplex, QuasiNewton };
  Method method = Method::Simplex;
  int max_iters = 4000;
  double f_tol = 1e-13;
  double x_tol = 1e-11;
  int restarts = 3;
  /// Required sup-norm of the average log-likelihood gradient at the optimum,
  /// measured in the unconstrained coordinates.
  double grad_tol = 1e-6;
};

/// Maximum-likelihood fit: theta_hat, the per-observation information
/// estimate vinv_hat, and the conditioning data.
struct FittedModel {
  ModelSpec spec;
  Eigen::VectorXd theta_hat;
  Eigen::MatrixXd vinv_hat;
  double loglik_at_max = 0.0;
  std::shared_ptr<const SeriesData> data;
  int effective_T = 0;
  bool vinv_repaired = false;
  /// Set when a closed-form fit lands on the constraint boundary
  /// (zero residual variance); no information matrix is available then.
  bool degenerate = false;

  int dim() const { return static_cast<int>(theta_hat.size()); }
};

/// Closed-form conditional MLE of the Gaussian AR(1) with its analytic
/// information matrix diag(S_yy / (T sigma2), 1 / (2 sigma2^2)).
FittedModel ar1_mle(const SeriesData& data);

/// Closed-form mixture MLE: state-conditional means, empirical transition
/// frequencies, residual variance. The Wald vector is (mu1, mu0, sigma2, p1)
/// with p1 picked by the terminal state.
FittedModel mixture_mle(const SeriesData& data);

/// Numerical MLE through the smooth reparameterization. Dispatches to the
/// closed forms for the AR(1) and mixture families.
FittedModel mle_fit(const ModelSpec& spec, const SeriesData& data,
                    const OptimizerConfig& cfg = {});

/// Heuristic starting point: AR coefficients from the lag-1 autocorrelation,
/// variances from residuals, v = 8, lambda = 0, HAR coefficients from least
/// squares with gamma = 0.
Eigen::VectorXd start_theta(const ModelSpec& spec, const SeriesData& data);

/// Per-observation information estimate at theta_hat. Analytic block-diagonal
/// for the linear-Gaussian families, central-difference Hessian otherwise;
/// non-PD results are repaired with an eigenvalue floor of 1e-10.
Eigen::MatrixXd information_matrix(const ModelSpec& spec, const Eigen::VectorXd& theta_hat,
                                   const SeriesData& data, bool* repaired = nullptr);

/// Finite-difference path, exposed for cross-checks against the analytic one.
Eigen::MatrixXd information_matrix_numeric(const ModelSpec& spec,
                                           const Eigen::VectorXd& theta_hat,
                                           const SeriesData& data, bool* repaired = nullptr);

/// Symmetrizes and floors the eigenvalues of a nearly-PD matrix.
Eigen::MatrixXd nearest_pd(const Eigen::MatrixXd& m, double eig_floor = 1e-10,
                           bool* repaired = nullptr);

}  // namespace fcs
