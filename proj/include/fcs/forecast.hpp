#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fcs/confidence.hpp"
#include "fcs/estimation.hpp"
#include "fcs/models.hpp"

namespace fcs {

enum class Target { Series, Return, Variance };

std::string target_name(Target t);
Target target_from_name(const std::string& name);

/// One-step-ahead forecast distribution: a tagged closed-form density with
/// analytic moments and squared-density integral (quadrature for the skew-t).
class ForecastDensity {
 public:
  enum class Form { Gaussian, Lognormal, Mixture2, SkewT };

  static ForecastDensity gaussian(double mu, double sigma2);
  static ForecastDensity lognormal(double beta, double sigmaV2);
  static ForecastDensity mixture2(double mu1, double mu0, double sigma2, double p1);
  static ForecastDensity skewt(double loc, double v, double lambda);

  double pdf(double y) const;
  double log_pdf(double y) const;
  double mean() const;
  double variance() const;

  /// integral of f(y)^2 over the support; closed forms for the Gaussian,
  /// lognormal and two-component mixture, adaptive quadrature (1e-8) for the
  /// skew-t.
  double sq_integral() const;

  /// [lo, hi] holding at least 1 - 2*tail_mass of the distribution, never
  /// narrower than k_floor standard deviations each side (quantile span for
  /// the lognormal; the skew-t span is capped at 25 sd to bound the grid
  /// resolution).
  std::pair<double, double> span(double k_floor, double tail_mass) const;

  Form form() const { return form_; }
  double param(int i) const { return par_[i]; }

 private:
  Form form_ = Form::Gaussian;
  double par_[4] = {0.0, 1.0, 0.0, 0.0};
};

/// Data summary that the one-step forecast density conditions on. For the HAR
/// families the standardized innovation u_T is evaluated once at the
/// parameters used to build the summary (the fitted ones in the pipeline).
struct Conditioning {
  double y_last = 0.0;
  std::vector<double> y_hist;  // linear-psi families, oldest first
  int d_last = 0;
  double r_last = 0.0;
  double u_last = 0.0;
  double lv1 = 0.0, lv5 = 0.0, lv22 = 0.0;  // terminal log-variance lags
};

Conditioning make_conditioning(const ModelSpec& spec, const Eigen::VectorXd& theta,
                               const SeriesData& data);

ForecastDensity make_forecast_density(const ModelSpec& spec, const Eigen::VectorXd& theta,
                                      const Conditioning& cond, Target target = Target::Series);

/// Forecast density parameterized directly by the canonical parameters:
/// Series eta = (mu, sigma2); Return eta = (mu, beta, sigmaV2);
/// Variance eta = (mu, beta, sigmaV2) with a lognormal LN(beta, sigmaV2).
ForecastDensity make_eta_density(const Eigen::VectorXd& eta, Target target);

/// Family's one-step conditional density at y.
double forecast_pdf(const ModelSpec& spec, const Eigen::VectorXd& theta, const Conditioning& cond,
                    double y, Target target = Target::Series);

struct DensityCurve {
  std::shared_ptr<const std::vector<double>> y_grid;
  std::vector<double> ordinates;
  int param_point_id = -1;  // -1 marks the plug-in curve
  std::string label;
};

/// Bounding curves for one forecast target: one curve per feasible boundary
/// point plus the plug-in curve, all on a shared grid, in boundary order.
struct FrameSet {
  std::shared_ptr<const std::vector<double>> y_grid;
  std::vector<DensityCurve> curves;
  std::vector<Eigen::VectorXd> curve_params;
  std::vector<ForecastDensity> curve_densities;
  DensityCurve plug_in;
  ForecastDensity plug_in_density;
  Target target = Target::Series;
  bool eta_space = false;
  GridSpec grid;
  std::uint64_t grid_hash = 0;
  double level = 0.0;
  double c_alpha = 0.0;
  int effective_T = 0;
  ModelSpec spec;
  std::string conditioning_summary;
};

/// 1001 equally spaced points spanning the plug-in density's +-8 sd
/// (quantile span for lognormal targets), widened to cover every feasible
/// boundary curve's +-6 sd range.
std::vector<double> y_grid_default(const ForecastDensity& plug_in,
                                   const std::vector<ForecastDensity>& frames);

FrameSet bounding_frames(const FittedModel& fit, const BoundarySet& boundary, Target target,
                         const std::vector<double>& y_grid, int threads = 1);

/// Convenience overload that builds the default grid.
FrameSet bounding_frames(const FittedModel& fit, const BoundarySet& boundary, Target target,
                         int threads = 1);

}  // namespace fcs
