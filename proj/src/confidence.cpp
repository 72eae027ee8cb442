#include "fcs/confidence.hpp"

#include <cmath>

#include "fcs/errors.hpp"
#include "fcs/optim.hpp"
#include "fcs/parallel.hpp"
#include "fcs/rng.hpp"
#include "fcs/simulate.hpp"
#include "fcs/special.hpp"

namespace fcs {

double chi2_quantile(int df, double level) {
  if (df < 1) throw ConfigError("chi2_quantile: df must be >= 1");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("chi2_quantile: level must lie in (0,1)");
  double hi = static_cast<double>(df);
  while (chi2_cdf(hi, df) < level) hi *= 2.0;
  return brent_root([&](double q) { return chi2_cdf(q, df) - level; }, 0.0, hi, 1e-12);
}

WaldSpec WaldSpec::from_level(Kind kind, double level, int df) {
  WaldSpec spec;
  spec.kind = kind;
  spec.level = level;
  spec.df = df;
  spec.c_alpha = chi2_quantile(df, level);
  return spec;
}

EtaMap identity_eta_map(int p) {
  EtaMap map;
  map.dim_eta = p;
  map.eta_of_theta = [](const Eigen::VectorXd& theta) { return theta; };
  map.grad = [p](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(p, p).eval(); };
  map.feasible = [](const Eigen::VectorXd&) { return true; };
  return map;
}

EtaMap har_eta_map(const FittedModel& fit) {
  if (fit.spec.family != Family::HarM1 && fit.spec.family != Family::HarM2) {
    throw ConfigError("har_eta_map: HAR fit required");
  }
  if (!fit.data) throw DataError("har_eta_map: fitted model carries no data");
  const bool m2 = fit.spec.family == Family::HarM2;
  const SeriesData& data = *fit.data;
  const std::size_t T = data.r.size();

  // Conditioning summary: u_T at theta_hat, terminal return, log-variance lags.
  HarParams at_hat = std::get<HarParams>(theta_to_params(fit.spec, fit.theta_hat));
  const HarRecursion rec = har_recursion(at_hat, data, m2);
  const double u_T = rec.u_last;
  const double r_T = data.r[T - 1];
  double lv1 = std::log(data.v[T - 1]);
  double lv5 = 0.0, lv22 = 0.0;
  for (std::size_t i = T - 5; i < T; ++i) lv5 += std::log(data.v[i]);
  for (std::size_t i = T - 22; i < T; ++i) lv22 += std::log(data.v[i]);
  lv5 /= 5.0;
  lv22 /= 22.0;

  const int p = param_dim(fit.spec);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(3, p);
  jac(0, 0) = 1.0;
  jac(0, 1) = r_T;
  jac(1, 2) = 1.0;
  jac(1, 3) = lv1;
  if (m2) {
    jac(1, 4) = u_T;
    jac(2, 5) = 1.0;
  } else {
    jac(1, 4) = lv5;
    jac(1, 5) = lv22;
    jac(1, 6) = u_T;
    jac(2, 7) = 1.0;
  }

  EtaMap map;
  map.dim_eta = 3;
  map.eta_of_theta = [jac](const Eigen::VectorXd& theta) {
    return (jac * theta).eval();  // the map is linear given the fixed summary
  };
  map.grad = [jac](const Eigen::VectorXd&) { return jac; };
  map.feasible = [](const Eigen::VectorXd& eta) { return eta(2) > 0.0; };
  return map;
}

EtaMap linear_psi_eta_map(const FittedModel& fit) {
  if (fit.spec.family != Family::LinearPsi) throw ConfigError("linear_psi_eta_map: linear-psi fit required");
  if (!fit.data) throw DataError("linear_psi_eta_map: fitted model carries no data");
  const ModelSpec spec = fit.spec;
  const std::vector<double> y = fit.data->y;  // captured by value
  const std::size_t T = y.size();
  const int k = param_dim(spec) - 1;

  EtaMap map;
  map.dim_eta = 2;
  map.eta_of_theta = [spec, y, T, k](const Eigen::VectorXd& theta) {
    LinearPsiParams p;
    p.family = spec.psi_family;
    p.rho.assign(theta.data(), theta.data() + k);
    p.sigma2 = theta(k);
    const std::vector<double> psi = psi_weights(p, static_cast<int>(T));
    double mu = 0.0;
    for (std::size_t j = 1; j <= T; ++j) mu += psi[j - 1] * y[T - j];
    Eigen::VectorXd eta(2);
    eta << mu, theta(k);
    return eta;
  };
  map.grad = [spec, y, T, k](const Eigen::VectorXd& theta) {
    LinearPsiParams p;
    p.family = spec.psi_family;
    p.rho.assign(theta.data(), theta.data() + k);
    p.sigma2 = theta(k);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2, k + 1);
    for (int c = 0; c < k; ++c) {
      const std::vector<double> dpsi = dpsi_weights(p, static_cast<int>(T), c);
      double z = 0.0;
      for (std::size_t j = 1; j <= T; ++j) z += dpsi[j - 1] * y[T - j];
      jac(0, c) = z;
    }
    jac(1, k) = 1.0;
    return jac;
  };
  map.feasible = [](const Eigen::VectorXd& eta) { return eta(1) > 0.0; };
  return map;
}

double wald_unconditional(const Eigen::VectorXd& theta, const FittedModel& fit) {
  if (theta.size() != fit.theta_hat.size()) throw ConfigError("wald_unconditional: dimension mismatch");
  if (fit.degenerate) throw EstimationError("wald_unconditional: degenerate fit");
  const Eigen::VectorXd diff = fit.theta_hat - theta;
  return fit.effective_T * diff.dot(fit.vinv_hat * diff);
}

double wald_ar1(double alpha1, double sigma2, const FittedModel& fit) {
  if (fit.spec.family != Family::Ar1Gaussian) throw ConfigError("wald_ar1: AR(1) fit required");
  if (!(sigma2 > 0.0)) throw std::domain_error("wald_ar1: sigma2 must be positive");
  if (fit.degenerate) throw EstimationError("wald_ar1: degenerate fit");
  const double T = fit.effective_T;
  const double alpha_hat = fit.theta_hat(0);
  const double sigma2_hat = fit.theta_hat(1);
  const double syy = fit.vinv_hat(0, 0) * T * sigma2_hat;
  const double x = sigma2_hat / sigma2 - 1.0;
  const double da = alpha_hat - alpha1;
  return 0.5 * T * x * x + da * da * syy / sigma2;
}

namespace {

// Upsilon = grad V(theta_hat) grad', repaired to PD if needed.
Eigen::MatrixXd conditional_upsilon(const FittedModel& fit, const EtaMap& map) {
  const Eigen::MatrixXd jac = map.grad(fit.theta_hat);
  Eigen::LLT<Eigen::MatrixXd> llt(fit.vinv_hat);
  if (llt.info() != Eigen::Success) {
    throw NumericError("wald_conditional: information matrix is not positive definite");
  }
  const Eigen::MatrixXd v =
      llt.solve(Eigen::MatrixXd::Identity(fit.dim(), fit.dim()));
  return nearest_pd(jac * v * jac.transpose());
}

}  // namespace

double wald_conditional(const Eigen::VectorXd& eta, const FittedModel& fit, const EtaMap& map) {
  if (eta.size() != map.dim_eta) throw ConfigError("wald_conditional: dimension mismatch");
  const Eigen::MatrixXd upsilon = conditional_upsilon(fit, map);
  Eigen::LLT<Eigen::MatrixXd> llt(upsilon);
  if (llt.info() != Eigen::Success) {
    throw NumericError("wald_conditional: Upsilon singular after repair");
  }
  const Eigen::VectorXd diff = map.eta_of_theta(fit.theta_hat) - eta;
  return fit.effective_T * diff.dot(llt.solve(diff));
}

GridSpec GridSpec::defaults(int dim) {
  GridSpec grid;
  grid.dim = dim;
  switch (dim) {
    case 2:
      grid.n = 360;
      break;
    case 3:
      grid.n = 20;
      grid.mesh = true;
      break;
    case 4:
      grid.n = 12;
      break;
    default:
      throw ConfigError("GridSpec: supported dimensions are 2, 3, 4");
  }
  return grid;
}

std::uint64_t GridSpec::hash() const {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  const auto mix = [&h](std::uint64_t value) {
    h ^= value;
    h *= 1099511628211ULL;
  };
  mix(static_cast<std::uint64_t>(dim));
  mix(static_cast<std::uint64_t>(n));
  mix(mesh ? 1 : 0);
  return h;
}

std::vector<Eigen::VectorXd> sphere_grid(int dim, int n) {
  if (dim < 2 || dim > 4) throw ConfigError("sphere_grid: supported dimensions are 2, 3, 4");
  if (n < 2) throw ConfigError("sphere_grid: n must be >= 2");
  std::vector<Eigen::VectorXd> out;
  if (dim == 2) {
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
      const double lam = 2.0 * M_PI * k / n;
      out.emplace_back(Eigen::Vector2d(std::cos(lam), std::sin(lam)));
    }
  } else if (dim == 3) {
    out.reserve(static_cast<std::size_t>(n + 1) * n);
    for (int i = 0; i <= n; ++i) {
      const double l1 = M_PI * i / n;
      for (int j = 0; j < n; ++j) {
        const double l2 = 2.0 * M_PI * j / n;
        out.emplace_back(
            Eigen::Vector3d(std::cos(l1), std::sin(l1) * std::cos(l2), std::sin(l1) * std::sin(l2)));
      }
    }
  } else {
    out.reserve(static_cast<std::size_t>(n + 1) * (n + 1) * n);
    for (int i = 0; i <= n; ++i) {
      const double l1 = M_PI * i / n;
      for (int j = 0; j <= n; ++j) {
        const double l2 = M_PI * j / n;
        for (int k = 0; k < n; ++k) {
          const double l3 = 2.0 * M_PI * k / n;
          Eigen::Vector4d x;
          x << std::cos(l1), std::sin(l1) * std::cos(l2), std::sin(l1) * std::sin(l2) * std::cos(l3),
              std::sin(l1) * std::sin(l2) * std::sin(l3);
          out.emplace_back(std::move(x));
        }
      }
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> sphere_grid_mesh3(int n) {
  if (n < 2) throw ConfigError("sphere_grid_mesh3: n must be >= 2");
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i) {
    const double phi = -0.5 * M_PI + M_PI * i / n;  // elevation
    for (int j = 0; j <= n; ++j) {
      const double theta = -M_PI + 2.0 * M_PI * j / n;  // azimuth
      out.emplace_back(Eigen::Vector3d(std::cos(phi) * std::cos(theta),
                                       std::cos(phi) * std::sin(theta), std::sin(phi)));
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> make_grid(const GridSpec& grid) {
  if (grid.mesh) {
    if (grid.dim != 3) throw ConfigError("make_grid: mesh mode is 3-d only");
    return sphere_grid_mesh3(grid.n);
  }
  return sphere_grid(grid.dim, grid.n);
}

BoundarySet boundary_traverse(const FittedModel& fit, const WaldSpec& spec, const GridSpec& grid,
                              const EtaMap* map, int threads) {
  if (fit.degenerate) throw EstimationError("boundary_traverse: degenerate fit");
  const bool conditional = spec.kind == WaldSpec::Kind::Conditional;
  if (conditional && map == nullptr) {
    throw ConfigError("boundary_traverse: conditional traversal requires an eta map");
  }

  Eigen::VectorXd center;
  Eigen::MatrixXd quad;  // Vinv or Upsilon^{-1}
  if (conditional) {
    center = map->eta_of_theta(fit.theta_hat);
    const Eigen::MatrixXd upsilon = conditional_upsilon(fit, *map);
    Eigen::LLT<Eigen::MatrixXd> llt(upsilon);
    if (llt.info() != Eigen::Success) {
      throw NumericError("boundary_traverse: Upsilon singular after repair");
    }
    quad = llt.solve(Eigen::MatrixXd::Identity(map->dim_eta, map->dim_eta));
  } else {
    center = fit.theta_hat;
    quad = fit.vinv_hat;
  }
  const int dim = static_cast<int>(center.size());
  if (grid.dim != dim) throw ConfigError("boundary_traverse: grid dimension mismatch");

  Eigen::LLT<Eigen::MatrixXd> llt(quad);
  if (llt.info() != Eigen::Success) {
    throw NumericError("boundary_traverse: Cholesky factorization failed");
  }
  const Eigen::MatrixXd u = llt.matrixL();
  const double radius = std::sqrt(spec.c_alpha / fit.effective_T);

  const std::vector<Eigen::VectorXd> sphere = make_grid(grid);
  BoundarySet set;
  set.grid = grid;
  set.center = center;
  set.eta_space = conditional;
  set.c_alpha = spec.c_alpha;
  set.level = spec.level;
  set.effective_T = fit.effective_T;
  set.points.resize(sphere.size());

  parallel_for(sphere.size(), threads, [&](std::size_t i) {
    BoundaryPoint& pt = set.points[i];
    pt.x = sphere[i];
    const Eigen::VectorXd step =
        u.transpose().triangularView<Eigen::Upper>().solve(sphere[i]);
    pt.param = center - radius * step;
    if (conditional) {
      pt.feasible = map->feasible(pt.param);
      pt.wald_value = wald_conditional(pt.param, fit, *map);
    } else {
      pt.feasible = theta_feasible(fit.spec, pt.param);
      pt.wald_value = wald_unconditional(pt.param, fit);
    }
  });
  return set;
}

Ar1Extremes ar1_extremes(const FittedModel& fit, const WaldSpec& spec) {
  if (fit.spec.family != Family::Ar1Gaussian) throw ConfigError("ar1_extremes: AR(1) fit required");
  if (fit.degenerate) throw EstimationError("ar1_extremes: degenerate fit");
  const double T = fit.effective_T;
  const double c = spec.c_alpha;
  const double alpha_hat = fit.theta_hat(0);
  const double sigma2_hat = fit.theta_hat(1);
  const double syy = fit.vinv_hat(0, 0) * T * sigma2_hat;

  Ar1Extremes out;
  out.a = std::sqrt(c / (0.5 * T));
  out.b = std::sqrt(c / syy);
  if (out.a >= 1.0) {
    throw EstimationError("ar1_extremes: sample too small (requires c_alpha < T/2)");
  }
  out.var_max_point = {alpha_hat, sigma2_hat / (1.0 - out.a)};
  out.var_min_point = {alpha_hat, sigma2_hat / (1.0 + out.a)};

  const auto gain = [&](double sigma2) {
    const double x = sigma2_hat / sigma2 - 1.0;
    return (c - 0.5 * T * x * x) * sigma2;
  };
  out.sigma_m2 =
      golden_section_max(gain, sigma2_hat / (1.0 + out.a), sigma2_hat / (1.0 - out.a), 1e-10);

  const double xm = sigma2_hat / out.sigma_m2 - 1.0;
  const double disc = (c - 0.5 * T * xm * xm) * out.sigma_m2 / syy;
  const double half_width = std::sqrt(std::max(disc, 0.0));
  out.alpha_max_point = {alpha_hat + half_width, out.sigma_m2};
  out.alpha_min_point = {alpha_hat - half_width, out.sigma_m2};
  return out;
}

CoverageReport coverage_mc(const ModelSpec& spec, const ModelParams& true_params, int T,
                           double level, int reps, std::uint64_t seed, int threads) {
  if (reps < 100) throw ConfigError("coverage_mc: need at least 100 replications");
  const int p = param_dim(spec);
  const double c = chi2_quantile(p, level);

  std::vector<int> hit(reps, 0);
  std::vector<int> skip(reps, 0);
  std::vector<double> radius(reps, 0.0);

  parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t rep) {
    const std::uint64_t rep_seed = CounterRng(seed, rep).next_u64();
    const SeriesData data = simulate(spec, true_params, T, rep_seed);
    try {
      FittedModel fit;
      if (spec.family == Family::Ar1Gaussian) {
        fit = ar1_mle(data);
        if (fit.degenerate) throw EstimationError("degenerate replication");
      } else {
        fit = mle_fit(spec, data);
      }
      const Eigen::VectorXd theta0 = params_to_theta(spec, true_params, data);
      hit[rep] = wald_unconditional(theta0, fit) <= c ? 1 : 0;
      Eigen::LLT<Eigen::MatrixXd> llt(fit.vinv_hat);
      double log_det = 0.0;
      const Eigen::MatrixXd l = llt.matrixL();
      for (int i = 0; i < p; ++i) log_det += 2.0 * std::log(l(i, i));
      radius[rep] = std::sqrt(c / fit.effective_T) * std::exp(-log_det / (2.0 * p));
    } catch (const EstimationError&) {
      skip[rep] = 1;
    }
  });

  CoverageReport report;
  report.reps = reps;
  report.level = level;
  report.c_alpha = c;
  report.T = T;
  for (int rep = 0; rep < reps; ++rep) {
    report.hits += hit[rep];
    report.skipped += skip[rep];
    report.avg_radius += radius[rep];
  }
  const int valid = reps - report.skipped;
  if (valid == 0) throw EstimationError("coverage_mc: every replication failed");
  report.coverage = static_cast<double>(report.hits) / valid;
  report.avg_radius /= valid;
  return report;
}

}  // namespace fcs
