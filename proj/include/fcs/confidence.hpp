#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "fcs/estimation.hpp"
#include "fcs/models.hpp"

namespace fcs {

/// chi^2(df) quantile by bracketed root finding on the regularized
/// incomplete gamma CDF; |CDF(q) - level| stays below 1e-10.
double chi2_quantile(int df, double level);

struct WaldSpec {
  enum class Kind { Unconditional, Conditional };
  Kind kind = Kind::Unconditional;
  double level = 0.95;  // this is 1 - alpha
  int df = 2;
  double c_alpha = 0.0;

  static WaldSpec from_level(Kind kind, double level, int df);
};

/// Map from theta to the forecast distribution's canonical parameters,
/// together with its Jacobian and the eta-space feasibility predicate.
struct EtaMap {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eta_of_theta;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> grad;  // dim_eta x p
  int dim_eta = 0;
  std::function<bool(const Eigen::VectorXd&)> feasible;
};

EtaMap identity_eta_map(int p);

/// eta = (mu_{T+1}, beta_{T+1}, sigmaV2) for the HAR models. The standardized
/// innovation u_T entering beta_{T+1} is part of the conditioning summary,
/// evaluated once at theta_hat, so the map is linear in theta.
EtaMap har_eta_map(const FittedModel& fit);

/// eta = (mu_{T+1}, sigma2) for the Gaussian linear psi-weight models.
EtaMap linear_psi_eta_map(const FittedModel& fit);

/// omega(theta) = T (theta_hat - theta)' Vinv (theta_hat - theta).
double wald_unconditional(const Eigen::VectorXd& theta, const FittedModel& fit);

/// Two-term AR(1) statistic (T/2)(sigma2_hat/sigma2 - 1)^2
/// + (alpha1_hat - alpha1)^2 S_yy / sigma2; exact on the transformed ellipse.
double wald_ar1(double alpha1, double sigma2, const FittedModel& fit);

/// Conditional statistic T (eta_hat - eta)' Upsilon^{-1} (eta_hat - eta),
/// Upsilon = grad V(theta_hat) grad'.
double wald_conditional(const Eigen::VectorXd& eta, const FittedModel& fit, const EtaMap& map);

struct GridSpec {
  int dim = 2;
  int n = 360;
  bool mesh = false;  // dim-3 axis-aligned surface mesh, (n+1)^2 points

  static GridSpec defaults(int dim);
  std::uint64_t hash() const;
};

/// Deterministic polar-angle grid on the unit sphere. dim-2 angles range over
/// [0, pi] with n+1 points each, the last angle over [0, 2pi) with n points.
std::vector<Eigen::VectorXd> sphere_grid(int dim, int n);

/// Axis-aligned 3-d surface mesh with (n+1)^2 points (the layout used for
/// the 441-point traversal when n = 20).
std::vector<Eigen::VectorXd> sphere_grid_mesh3(int n);

std::vector<Eigen::VectorXd> make_grid(const GridSpec& grid);

struct BoundaryPoint {
  Eigen::VectorXd param;  // theta, or eta for conditional sets
  Eigen::VectorXd x;      // generating unit-sphere point
  double wald_value = 0.0;
  bool feasible = true;
};

struct BoundarySet {
  std::vector<BoundaryPoint> points;
  GridSpec grid;
  Eigen::VectorXd center;  // theta_hat or eta_hat
  bool eta_space = false;
  double c_alpha = 0.0;
  double level = 0.0;
  int effective_T = 0;
};

/// Maps every sphere point through theta = theta_hat - sqrt(c/T) (U^{-1})' x
/// with Vinv = U U' (lower-triangular Cholesky); conditional sets replace
/// theta_hat and Vinv by eta_hat and Upsilon^{-1}. Points violating model
/// constraints are kept with feasible = false.
BoundarySet boundary_traverse(const FittedModel& fit, const WaldSpec& spec, const GridSpec& grid,
                              const EtaMap* map = nullptr, int threads = 1);

struct Ar1Extremes {
  struct Point {
    double alpha1 = 0.0;
    double sigma2 = 0.0;
  };
  Point var_max_point, var_min_point, alpha_max_point, alpha_min_point;
  double a = 0.0;
  double b = 0.0;
  double sigma_m2 = 0.0;
};

/// Representative extreme boundary points of the AR(1) ellipse: the largest
/// and smallest conditional variance, and the largest and smallest
/// persistence at sigma_m2 (found by golden-section search).
Ar1Extremes ar1_extremes(const FittedModel& fit, const WaldSpec& spec);

struct CoverageReport {
  double coverage = 0.0;
  int reps = 0;
  int hits = 0;
  int skipped = 0;
  double avg_radius = 0.0;
  double c_alpha = 0.0;
  double level = 0.0;
  int T = 0;
};

/// Monte Carlo coverage of the unconditional Wald set: the fraction of
/// replications with omega(theta_0) <= c_alpha under the fitted model, plus
/// an information-scaled average radius for tightness comparisons.
CoverageReport coverage_mc(const ModelSpec& spec, const ModelParams& true_params, int T,
                           double level, int reps, std::uint64_t seed, int threads = 1);

}  // namespace fcs
