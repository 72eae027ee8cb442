#include "fcs/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fcs/errors.hpp"
#include "fcs/parallel.hpp"
#include "fcs/quadrature.hpp"
#include "fcs/special.hpp"

namespace fcs {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kLog2Pi = 1.8378770664093454836;
}  // namespace

std::string target_name(Target t) {
  switch (t) {
    case Target::Series: return "series";
    case Target::Return: return "return";
    case Target::Variance: return "variance";
  }
  throw ConfigError("unknown target");
}

Target target_from_name(const std::string& name) {
  if (name == "series") return Target::Series;
  if (name == "return") return Target::Return;
  if (name == "variance") return Target::Variance;
  throw ConfigError("unknown target '" + name + "'");
}

ForecastDensity ForecastDensity::gaussian(double mu, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::domain_error("ForecastDensity: sigma2 must be positive");
  ForecastDensity d;
  d.form_ = Form::Gaussian;
  d.par_[0] = mu;
  d.par_[1] = sigma2;
  return d;
}

ForecastDensity ForecastDensity::lognormal(double beta, double sigmaV2) {
  if (!(sigmaV2 > 0.0)) throw std::domain_error("ForecastDensity: sigmaV2 must be positive");
  ForecastDensity d;
  d.form_ = Form::Lognormal;
  d.par_[0] = beta;
  d.par_[1] = sigmaV2;
  return d;
}

ForecastDensity ForecastDensity::mixture2(double mu1, double mu0, double sigma2, double p1) {
  if (!(sigma2 > 0.0)) throw std::domain_error("ForecastDensity: sigma2 must be positive");
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::domain_error("ForecastDensity: p1 must lie in [0,1]");
  ForecastDensity d;
  d.form_ = Form::Mixture2;
  d.par_[0] = mu1;
  d.par_[1] = mu0;
  d.par_[2] = sigma2;
  d.par_[3] = p1;
  return d;
}

ForecastDensity ForecastDensity::skewt(double loc, double v, double lambda) {
  hansen_constants(v, lambda);  // validates the domain
  ForecastDensity d;
  d.form_ = Form::SkewT;
  d.par_[0] = loc;
  d.par_[1] = v;
  d.par_[2] = lambda;
  return d;
}

double ForecastDensity::pdf(double y) const {
  switch (form_) {
    case Form::Gaussian:
      return normal_pdf(y, par_[0], par_[1]);
    case Form::Lognormal:
      return lognormal_pdf(y, par_[0], par_[1]);
    case Form::Mixture2:
      return par_[3] * normal_pdf(y, par_[0], par_[2]) +
             (1.0 - par_[3]) * normal_pdf(y, par_[1], par_[2]);
    case Form::SkewT:
      return skewt_pdf(y - par_[0], par_[1], par_[2]);
  }
  throw NumericError("ForecastDensity: unknown form");
}

double ForecastDensity::log_pdf(double y) const {
  switch (form_) {
    case Form::Gaussian: {
      const double d = y - par_[0];
      return -0.5 * kLog2Pi - 0.5 * std::log(par_[1]) - 0.5 * d * d / par_[1];
    }
    case Form::Lognormal:
      return lognormal_log_pdf(y, par_[0], par_[1]);
    case Form::Mixture2:
      return std::log(pdf(y));
    case Form::SkewT:
      return skewt_log_pdf(y - par_[0], par_[1], par_[2], hansen_constants(par_[1], par_[2]));
  }
  throw NumericError("ForecastDensity: unknown form");
}

double ForecastDensity::mean() const {
  switch (form_) {
    case Form::Gaussian:
      return par_[0];
    case Form::Lognormal:
      return std::exp(par_[0] + 0.5 * par_[1]);
    case Form::Mixture2:
      return par_[3] * par_[0] + (1.0 - par_[3]) * par_[1];
    case Form::SkewT:
      return par_[0];  // innovations are standardized
  }
  throw NumericError("ForecastDensity: unknown form");
}

double ForecastDensity::variance() const {
  switch (form_) {
    case Form::Gaussian:
      return par_[1];
    case Form::Lognormal:
      return (std::exp(par_[1]) - 1.0) * std::exp(2.0 * par_[0] + par_[1]);
    case Form::Mixture2: {
      const double m = mean();
      return par_[2] + par_[3] * par_[0] * par_[0] + (1.0 - par_[3]) * par_[1] * par_[1] - m * m;
    }
    case Form::SkewT:
      return 1.0;
  }
  throw NumericError("ForecastDensity: unknown form");
}

double ForecastDensity::sq_integral() const {
  switch (form_) {
    case Form::Gaussian:
      return 1.0 / (2.0 * std::sqrt(par_[1]) * kSqrtPi);
    case Form::Lognormal:
      return std::exp(0.25 * par_[1] - par_[0]) / (2.0 * std::sqrt(par_[1]) * kSqrtPi);
    case Form::Mixture2: {
      // Gaussian product expansion: the cross term is a normal ordinate at
      // the mean separation with doubled variance.
      const double p = par_[3];
      const double base = 1.0 / (2.0 * std::sqrt(par_[2]) * kSqrtPi);
      const double dmu = par_[0] - par_[1];
      const double cross = std::exp(-dmu * dmu / (4.0 * par_[2]));
      return base * (p * p + (1.0 - p) * (1.0 - p) + 2.0 * p * (1.0 - p) * cross);
    }
    case Form::SkewT: {
      const double v = par_[1], lambda = par_[2];
      const double lo = skewt_quantile(1e-9, v, lambda);
      const double hi = skewt_quantile(1.0 - 1e-9, v, lambda);
      const HansenConstants h = hansen_constants(v, lambda);
      const double kink = -h.a_h / h.b_h;
      const auto f2 = [&](double x) {
        const double f = skewt_pdf(x, v, lambda);
        return f * f;
      };
      return integrate(f2, lo, kink, 5e-11) + integrate(f2, kink, hi, 5e-11);
    }
  }
  throw NumericError("ForecastDensity: unknown form");
}

std::pair<double, double> ForecastDensity::span(double k_floor, double tail_mass) const {
  switch (form_) {
    case Form::Gaussian: {
      const double sd = std::sqrt(par_[1]);
      const double k = std::max(k_floor, -normal_quantile(tail_mass));
      return {par_[0] - k * sd, par_[0] + k * sd};
    }
    case Form::Lognormal: {
      // Positive quantile span per the curve contract.
      const double sd = std::sqrt(par_[1]);
      const double z = -normal_quantile(1e-6);
      return {std::exp(par_[0] - z * sd), std::exp(par_[0] + z * sd)};
    }
    case Form::Mixture2: {
      const double sd = std::sqrt(par_[2]);
      const double k = std::max(k_floor, -normal_quantile(tail_mass));
      const double lo = std::min(par_[0], par_[1]) - k * sd;
      const double hi = std::max(par_[0], par_[1]) + k * sd;
      const double osd = std::sqrt(variance());
      return {std::min(lo, mean() - k_floor * osd), std::max(hi, mean() + k_floor * osd)};
    }
    case Form::SkewT: {
      const double v = par_[1], lambda = par_[2];
      double lo = skewt_quantile(tail_mass, v, lambda);
      double hi = skewt_quantile(1.0 - tail_mass, v, lambda);
      lo = std::clamp(lo, -25.0, -k_floor);
      hi = std::clamp(hi, k_floor, 25.0);
      return {par_[0] + lo, par_[0] + hi};
    }
  }
  throw NumericError("ForecastDensity: unknown form");
}

Conditioning make_conditioning(const ModelSpec& spec, const Eigen::VectorXd& theta,
                               const SeriesData& data) {
  Conditioning cond;
  switch (spec.family) {
    case Family::Ar1Gaussian:
    case Family::SkewTAr1:
      if (data.y.empty()) throw DataError("make_conditioning: empty series");
      cond.y_last = data.y.back();
      break;
    case Family::LinearPsi:
      if (data.y.empty()) throw DataError("make_conditioning: empty series");
      cond.y_hist = data.y;
      cond.y_last = data.y.back();
      break;
    case Family::Mixture:
      if (!data.has_states()) throw DataError("make_conditioning: mixture requires states");
      cond.d_last = data.d.back();
      cond.y_last = data.y.back();
      break;
    case Family::HarM1:
    case Family::HarM2: {
      const std::size_t T = data.r.size();
      if (T < 24) throw DataError("make_conditioning: HAR needs 22 variance lags plus start");
      const HarParams p = std::get<HarParams>(theta_to_params(spec, theta));
      const HarRecursion rec = har_recursion(p, data, spec.family == Family::HarM2);
      cond.r_last = data.r[T - 1];
      cond.u_last = rec.u_last;
      cond.lv1 = std::log(data.v[T - 1]);
      double s5 = 0.0, s22 = 0.0;
      for (std::size_t i = T - 5; i < T; ++i) s5 += std::log(data.v[i]);
      for (std::size_t i = T - 22; i < T; ++i) s22 += std::log(data.v[i]);
      cond.lv5 = s5 / 5.0;
      cond.lv22 = s22 / 22.0;
      break;
    }
  }
  return cond;
}

ForecastDensity make_forecast_density(const ModelSpec& spec, const Eigen::VectorXd& theta,
                                      const Conditioning& cond, Target target) {
  switch (spec.family) {
    case Family::Ar1Gaussian:
      return ForecastDensity::gaussian(theta(0) * cond.y_last, theta(1));
    case Family::LinearPsi: {
      if (cond.y_hist.empty()) throw DataError("forecast: linear-psi needs the full history");
      LinearPsiParams p;
      p.family = spec.psi_family;
      const int k = param_dim(spec) - 1;
      p.rho.assign(theta.data(), theta.data() + k);
      p.sigma2 = theta(k);
      const std::size_t T = cond.y_hist.size();
      const std::vector<double> psi = psi_weights(p, static_cast<int>(T));
      double mu = 0.0;
      for (std::size_t j = 1; j <= T; ++j) mu += psi[j - 1] * cond.y_hist[T - j];
      return ForecastDensity::gaussian(mu, p.sigma2);
    }
    case Family::SkewTAr1:
      return ForecastDensity::skewt(theta(0) * cond.y_last, theta(1), theta(2));
    case Family::Mixture:
      return ForecastDensity::mixture2(theta(0), theta(1), theta(2), theta(3));
    case Family::HarM1:
    case Family::HarM2: {
      const bool m2 = spec.family == Family::HarM2;
      const double mu = theta(0) + theta(1) * cond.r_last;
      double beta, sv2;
      if (m2) {
        beta = theta(2) + theta(3) * cond.lv1 + theta(4) * cond.u_last;
        sv2 = theta(5);
      } else {
        beta = theta(2) + theta(3) * cond.lv1 + theta(4) * cond.lv5 + theta(5) * cond.lv22 +
               theta(6) * cond.u_last;
        sv2 = theta(7);
      }
      if (target == Target::Return) {
        return ForecastDensity::gaussian(mu, std::exp(beta + 0.5 * sv2));
      }
      if (target == Target::Variance) {
        return ForecastDensity::lognormal(beta, sv2);
      }
      throw ConfigError("forecast: HAR forecasts target 'return' or 'variance'");
    }
  }
  throw ConfigError("forecast: unknown model family");
}

ForecastDensity make_eta_density(const Eigen::VectorXd& eta, Target target) {
  switch (target) {
    case Target::Series:
      if (eta.size() != 2) throw ConfigError("make_eta_density: series eta is (mu, sigma2)");
      return ForecastDensity::gaussian(eta(0), eta(1));
    case Target::Return:
      if (eta.size() != 3) throw ConfigError("make_eta_density: return eta is (mu, beta, sigmaV2)");
      return ForecastDensity::gaussian(eta(0), std::exp(eta(1) + 0.5 * eta(2)));
    case Target::Variance:
      if (eta.size() != 3) throw ConfigError("make_eta_density: variance eta is (mu, beta, sigmaV2)");
      return ForecastDensity::lognormal(eta(1), eta(2));
  }
  throw ConfigError("make_eta_density: unknown target");
}

double forecast_pdf(const ModelSpec& spec, const Eigen::VectorXd& theta, const Conditioning& cond,
                    double y, Target target) {
  return make_forecast_density(spec, theta, cond, target).pdf(y);
}

std::vector<double> y_grid_default(const ForecastDensity& plug_in,
                                   const std::vector<ForecastDensity>& frames) {
  auto [lo, hi] = plug_in.span(8.0, 2e-5);
  for (const ForecastDensity& frame : frames) {
    const auto [flo, fhi] = frame.span(6.0, 2e-5);
    lo = std::min(lo, flo);
    hi = std::max(hi, fhi);
  }
  if (plug_in.form() == ForecastDensity::Form::Lognormal) lo = std::max(lo, 1e-300);
  std::vector<double> grid(1001);
  const double step = (hi - lo) / 1000.0;
  for (int i = 0; i <= 1000; ++i) grid[i] = lo + step * i;
  return grid;
}

namespace {

ForecastDensity point_density(const FittedModel& fit, const BoundarySet& boundary,
                              const Eigen::VectorXd& param, Target target,
                              const Conditioning& cond) {
  if (boundary.eta_space) return make_eta_density(param, target);
  return make_forecast_density(fit.spec, param, cond, target);
}

std::string conditioning_text(const ModelSpec& spec, const Conditioning& cond) {
  std::ostringstream os;
  switch (spec.family) {
    case Family::Ar1Gaussian:
    case Family::SkewTAr1:
      os << "y_T=" << cond.y_last;
      break;
    case Family::LinearPsi:
      os << "y_T=" << cond.y_last << " (T=" << cond.y_hist.size() << " lags)";
      break;
    case Family::Mixture:
      os << "d_T=" << cond.d_last;
      break;
    case Family::HarM1:
    case Family::HarM2:
      os << "r_T=" << cond.r_last << " u_T=" << cond.u_last << " logV_T=" << cond.lv1;
      break;
  }
  return os.str();
}

}  // namespace

FrameSet bounding_frames(const FittedModel& fit, const BoundarySet& boundary, Target target,
                         const std::vector<double>& y_grid, int threads) {
  const Conditioning cond = make_conditioning(fit.spec, fit.theta_hat, *fit.data);

  FrameSet set;
  set.target = target;
  set.eta_space = boundary.eta_space;
  set.grid = boundary.grid;
  set.grid_hash = boundary.grid.hash();
  set.level = boundary.level;
  set.c_alpha = boundary.c_alpha;
  set.effective_T = boundary.effective_T;
  set.spec = fit.spec;
  set.conditioning_summary = conditioning_text(fit.spec, cond);

  std::vector<int> ids;
  for (std::size_t i = 0; i < boundary.points.size(); ++i) {
    if (!boundary.points[i].feasible) continue;
    ids.push_back(static_cast<int>(i));
    set.curve_params.push_back(boundary.points[i].param);
    set.curve_densities.push_back(
        point_density(fit, boundary, boundary.points[i].param, target, cond));
  }
  if (ids.empty()) throw NumericError("bounding_frames: no feasible boundary points");

  set.plug_in_density = boundary.eta_space ? make_eta_density(boundary.center, target)
                                           : make_forecast_density(fit.spec, fit.theta_hat, cond, target);

  set.y_grid = std::make_shared<const std::vector<double>>(y_grid);
  const std::vector<double>& grid = *set.y_grid;

  set.curves.resize(ids.size());
  parallel_for(ids.size(), threads, [&](std::size_t k) {
    DensityCurve& curve = set.curves[k];
    curve.y_grid = set.y_grid;
    curve.param_point_id = ids[k];
    curve.label = "boundary";
    curve.ordinates.resize(grid.size());
    const ForecastDensity& density = set.curve_densities[k];
    for (std::size_t g = 0; g < grid.size(); ++g) curve.ordinates[g] = density.pdf(grid[g]);
  });

  set.plug_in.y_grid = set.y_grid;
  set.plug_in.param_point_id = -1;
  set.plug_in.label = "plug-in";
  set.plug_in.ordinates.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    set.plug_in.ordinates[g] = set.plug_in_density.pdf(grid[g]);
  }
  return set;
}

FrameSet bounding_frames(const FittedModel& fit, const BoundarySet& boundary, Target target,
                         int threads) {
  const Conditioning cond = make_conditioning(fit.spec, fit.theta_hat, *fit.data);
  std::vector<ForecastDensity> densities;
  for (const BoundaryPoint& pt : boundary.points) {
    if (!pt.feasible) continue;
    densities.push_back(point_density(fit, boundary, pt.param, target, cond));
  }
  if (densities.empty()) throw NumericError("bounding_frames: no feasible boundary points");
  const ForecastDensity plug_in = boundary.eta_space
                                      ? make_eta_density(boundary.center, target)
                                      : make_forecast_density(fit.spec, fit.theta_hat, cond, target);
  return bounding_frames(fit, boundary, target, y_grid_default(plug_in, densities), threads);
}

}  // namespace fcs
