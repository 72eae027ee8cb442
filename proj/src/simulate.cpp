#include "fcs/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "fcs/errors.hpp"
#include "fcs/rng.hpp"

namespace fcs {

namespace {

constexpr int kBurnIn = 500;

SeriesData simulate_ar1(const Ar1GaussianParams& p, int T, std::uint64_t seed) {
  if (!p.feasible()) throw ConfigError("simulate: infeasible AR(1) parameters");
  CounterRng rng(seed);
  const double sd = std::sqrt(p.sigma2);
  double y = 0.0;
  SeriesData out;
  out.y.reserve(T);
  for (int t = 0; t < kBurnIn + T; ++t) {
    y = p.alpha1 * y + sd * rng.next_normal();
    if (t >= kBurnIn) out.y.push_back(y);
  }
  return out;
}

SeriesData simulate_linear_psi(const LinearPsiParams& p, int T, std::uint64_t seed) {
  if (!p.feasible()) throw ConfigError("simulate: infeasible linear-psi parameters");
  CounterRng rng(seed);
  const double sd = std::sqrt(p.sigma2);
  const int total = kBurnIn + T;
  const LinearPsiParams weights_params = p;
  const std::vector<double> psi = psi_weights(weights_params, total);
  std::vector<double> path(total);
  for (int t = 0; t < total; ++t) {
    double mean = 0.0;
    for (int j = 1; j <= t; ++j) {
      const double w = psi[j - 1];
      if (std::abs(w) < 1e-12) continue;
      mean += w * path[t - j];
    }
    path[t] = mean + sd * rng.next_normal();
  }
  SeriesData out;
  out.y.assign(path.begin() + kBurnIn, path.end());
  return out;
}

SeriesData simulate_skewt_ar1(const SkewTAr1Params& p, int T, std::uint64_t seed) {
  if (!p.feasible()) throw ConfigError("simulate: infeasible skew-t parameters");
  CounterRng rng(seed);
  double y = 0.0;
  SeriesData out;
  out.y.reserve(T);
  for (int t = 0; t < kBurnIn + T; ++t) {
    y = p.alpha1 * y + skewt_quantile(rng.next_uniform(), p.v, p.lambda);
    if (t >= kBurnIn) out.y.push_back(y);
  }
  return out;
}

SeriesData simulate_mixture(const MixtureParams& p, int T, std::uint64_t seed) {
  if (!p.feasible()) throw ConfigError("simulate: infeasible mixture parameters");
  CounterRng rng(seed);
  const double sd = std::sqrt(p.sigma2);
  SeriesData out;
  out.y.reserve(T);
  out.d.reserve(T);
  int d_prev = 0;  // d_0 = 0
  for (int t = 0; t < T; ++t) {
    const double s = p.p10 + (p.p11 - p.p10) * d_prev;
    const int d = rng.next_uniform() < s ? 1 : 0;
    const double mu = d == 1 ? p.mu1 : p.mu0;
    out.d.push_back(d);
    out.y.push_back(mu + sd * rng.next_normal());
    d_prev = d;
  }
  return out;
}

SeriesData simulate_har(const HarParams& p, int T, std::uint64_t seed, bool m2_dynamics) {
  if (!p.feasible()) throw ConfigError("simulate: infeasible HAR parameters");
  CounterRng rng(seed);
  const double sv = std::sqrt(p.sigmaV2);

  // Pre-sample log-variance level from the recursion's fixed point with u = 0.
  const double phi_sum = m2_dynamics ? p.phi1 : p.phi1 + p.phi2 + p.phi3;
  const double level = std::abs(1.0 - phi_sum) > 1e-6 ? p.omega_h / (1.0 - phi_sum) : 0.0;

  std::vector<double> logv(22, level);
  double r_prev = std::abs(1.0 - p.alpha2) > 1e-6 ? p.alpha1 / (1.0 - p.alpha2) : 0.0;
  double u = 0.0;

  std::vector<double> r_path, v_path;
  r_path.reserve(T);
  v_path.reserve(T);
  const auto lag_mean = [&](std::size_t h) {
    double s = 0.0;
    for (std::size_t i = logv.size() - h; i < logv.size(); ++i) s += logv[i];
    return s / static_cast<double>(h);
  };

  for (int t = 0; t < kBurnIn + T; ++t) {
    double beta = p.omega_h + p.phi1 * logv.back() + p.gamma * u;
    if (!m2_dynamics) beta += p.phi2 * lag_mean(5) + p.phi3 * lag_mean(22);
    const double mu = p.alpha1 + p.alpha2 * r_prev;
    const double sigma = std::sqrt(std::exp(beta + 0.5 * p.sigmaV2));
    const double r = mu + sigma * rng.next_normal();
    const double lv = beta + sv * rng.next_normal();
    u = (r - mu) / sigma;
    r_prev = r;
    logv.push_back(lv);
    if (t >= kBurnIn) {
      r_path.push_back(r);
      v_path.push_back(std::exp(lv));
    }
  }
  SeriesData out;
  out.kind = SeriesKind::ReturnsVariance;
  out.r = std::move(r_path);
  out.v = std::move(v_path);
  return out;
}

}  // namespace

SeriesData simulate(const ModelSpec& spec, const ModelParams& params, int T, std::uint64_t seed) {
  if (T < 1) throw ConfigError("simulate: T must be >= 1");
  switch (spec.family) {
    case Family::Ar1Gaussian:
      return simulate_ar1(std::get<Ar1GaussianParams>(params), T, seed);
    case Family::LinearPsi:
      return simulate_linear_psi(std::get<LinearPsiParams>(params), T, seed);
    case Family::SkewTAr1:
      return simulate_skewt_ar1(std::get<SkewTAr1Params>(params), T, seed);
    case Family::Mixture:
      return simulate_mixture(std::get<MixtureParams>(params), T, seed);
    case Family::HarM1:
      return simulate_har(std::get<HarParams>(params), T, seed, false);
    case Family::HarM2:
      return simulate_har(std::get<HarParams>(params), T, seed, true);
  }
  throw ConfigError("simulate: unknown model family");
}

HarParams synthetic_har_params() {
  HarParams p;
  p.alpha1 = 0.05;
  p.alpha2 = -0.08;
  p.omega_h = -0.30;
  p.phi1 = 0.38;
  p.phi2 = 0.30;
  p.phi3 = 0.22;
  p.gamma = -0.15;
  p.sigmaV2 = 0.35;
  return p;
}

}  // namespace fcs
