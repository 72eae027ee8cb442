#pragma once

#include <Eigen/Dense>
#include <functional>

namespace fcs {

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

struct OptimResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead simplex minimization.
OptimResult nelder_mead(const ObjectiveFn& f, const Eigen::VectorXd& x0, int max_iters = 5000,
                        double f_tol = 1e-12, double x_tol = 1e-10);

/// BFGS minimization with central-difference gradients and Armijo backtracking.
OptimResult bfgs(const ObjectiveFn& f, const Eigen::VectorXd& x0, int max_iters = 500,
                 double g_tol = 1e-8);

/// Central-difference gradient, step h_i = sqrt(eps) * max(1, |x_i|).
Eigen::VectorXd numerical_gradient(const ObjectiveFn& f, const Eigen::VectorXd& x);

/// Central-difference Hessian, step h_i = eps^(1/3) * max(1, |x_i|).
Eigen::MatrixXd numerical_hessian(const ObjectiveFn& f, const Eigen::VectorXd& x);

/// Maximize a unimodal g over [lo, hi] by golden-section search; returns the
/// abscissa once the bracket width falls below rel_tol * max(1, |x|).
double golden_section_max(const std::function<double(double)>& g, double lo, double hi,
                          double rel_tol = 1e-10);

/// Brent root finding on [lo, hi]; f(lo) and f(hi) must differ in sign.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double x_tol = 1e-14, int max_iters = 200);

}  // namespace fcs
