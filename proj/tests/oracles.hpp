// Test-only oracles: independent brute-force implementations used to freeze
// or cross-check expected values. Nothing here calls the library code paths
// under test.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

inline constexpr double kLog2Pi = 1.8378770664093454836;

// Composite Simpson on a fixed grid (n even).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// Richardson-extrapolated Simpson: doubles the grid until stable.
inline double integrate_ref(const std::function<double(double)>& f, double a, double b,
                            double tol = 1e-11) {
  double prev = simpson(f, a, b, 2000);
  for (int n = 4000; n <= 512000; n *= 2) {
    const double cur = simpson(f, a, b, n);
    if (std::fabs(cur - prev) < tol * (1.0 + std::fabs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    sum += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  }
  return sum;
}

// Per-term AR(1) Gaussian average log-likelihood, naive loop.
inline double naive_ar1_loglik(const std::vector<double>& y, double alpha, double sigma2) {
  double sum = 0.0;
  const std::size_t T = y.size();
  for (std::size_t t = 1; t < T; ++t) {
    const double e = y[t] - alpha * y[t - 1];
    sum += -0.5 * kLog2Pi - 0.5 * std::log(sigma2) - 0.5 * e * e / sigma2;
  }
  return sum / static_cast<double>(T - 1);
}

// ARMA(1,1) AR(inf) weights by long division of (1 - ar L) by (1 + ma L):
// pi_0 = 1, pi_1 = -(ar + ma), pi_j = -ma pi_{j-1}; psi_j = -pi_j.
inline std::vector<double> arma11_psi_longdiv(double ar, double ma, int lags) {
  std::vector<double> psi(lags, 0.0);
  double pi_prev = -(ar + ma);
  psi[0] = -pi_prev;
  for (int j = 2; j <= lags; ++j) {
    pi_prev = -ma * pi_prev;
    psi[j - 1] = -pi_prev;
  }
  return psi;
}

// ARFIMA(0,d,0) AR(inf) weights psi_j = -pi_j with
// pi_j = prod_{k=1..j} (k-1-d)/k (the binomial expansion of (1-L)^d).
inline std::vector<double> arfima_psi_product(double d, int lags) {
  std::vector<double> psi(lags, 0.0);
  for (int j = 1; j <= lags; ++j) {
    double pi = 1.0;
    for (int k = 1; k <= j; ++k) pi *= (k - 1.0 - d) / k;
    psi[j - 1] = -pi;
  }
  return psi;
}

// Gaussian linear-process average log-likelihood, naive double loop with
// externally supplied psi weights.
inline double naive_linear_loglik(const std::vector<double>& y, const std::vector<double>& psi,
                                  double sigma2) {
  const std::size_t T = y.size();
  double sum = 0.0;
  for (std::size_t t = 1; t < T; ++t) {
    double mean = 0.0;
    for (std::size_t j = 1; j <= t; ++j) mean += psi[j - 1] * y[t - j];
    const double e = y[t] - mean;
    sum += -0.5 * kLog2Pi - 0.5 * std::log(sigma2) - 0.5 * e * e / sigma2;
  }
  return sum / static_cast<double>(T - 1);
}

// Hansen skew-t density straight from the piecewise definition.
inline double naive_skewt_pdf(double x, double v, double lambda) {
  const double c = std::exp(std::lgamma(0.5 * (v + 1.0)) - std::lgamma(0.5 * v)) /
                   std::sqrt(M_PI * (v - 2.0));
  const double a = 4.0 * lambda * c * (v - 2.0) / (v - 1.0);
  const double b = std::sqrt(1.0 + 3.0 * lambda * lambda - a * a);
  const double denom = (x < -a / b) ? (1.0 - lambda) : (1.0 + lambda);
  const double z = (b * x + a) / denom;
  return b * c * std::pow(1.0 + z * z / (v - 2.0), -0.5 * (v + 1.0));
}

inline double naive_skewt_ar1_loglik(const std::vector<double>& y, double alpha, double v,
                                     double lambda) {
  double sum = 0.0;
  for (std::size_t t = 1; t < y.size(); ++t) {
    sum += std::log(naive_skewt_pdf(y[t] - alpha * y[t - 1], v, lambda));
  }
  return sum / static_cast<double>(y.size() - 1);
}

inline double normal_logpdf(double x, double mu, double s2) {
  const double e = x - mu;
  return -0.5 * kLog2Pi - 0.5 * std::log(s2) - 0.5 * e * e / s2;
}

inline double naive_mixture_loglik(const std::vector<double>& y, const std::vector<int>& d,
                                   double mu1, double mu0, double s2, double p11, double p10) {
  double sum = 0.0;
  for (std::size_t t = 1; t < y.size(); ++t) {
    sum += normal_logpdf(y[t], d[t] == 1 ? mu1 : mu0, s2);
    const double p = d[t - 1] == 1 ? p11 : p10;
    sum += std::log(d[t] == 1 ? p : 1.0 - p);
  }
  return sum / static_cast<double>(y.size() - 1);
}

// Full HAR recursion, written independently (index arithmetic and averaging
// done longhand).
inline double naive_har_loglik(const std::vector<double>& r, const std::vector<double>& v,
                               double a1, double a2, double w, double p1, double p2, double p3,
                               double g, double sv2) {
  const std::size_t T = r.size();
  std::vector<double> lv(T);
  for (std::size_t i = 0; i < T; ++i) lv[i] = std::log(v[i]);
  double u = 0.0;
  double sum = 0.0;
  for (std::size_t i = 22; i < T; ++i) {
    double m5 = 0.0, m22 = 0.0;
    for (std::size_t k = i - 5; k < i; ++k) m5 += lv[k];
    for (std::size_t k = i - 22; k < i; ++k) m22 += lv[k];
    const double beta = w + p1 * lv[i - 1] + p2 * m5 / 5.0 + p3 * m22 / 22.0 + g * u;
    const double mu = a1 + a2 * r[i - 1];
    const double s2 = std::exp(beta + 0.5 * sv2);
    sum += normal_logpdf(r[i], mu, s2) + normal_logpdf(lv[i], beta, sv2);
    u = (r[i] - mu) / std::sqrt(s2);
  }
  return sum / static_cast<double>(T - 22);
}

// chi-square CDF by numeric integration of the density (df > 0).
inline double chi2_cdf_integral(double x, double df) {
  const double log_norm = -0.5 * df * std::log(2.0) - std::lgamma(0.5 * df);
  const auto dens = [&](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(log_norm + (0.5 * df - 1.0) * std::log(t) - 0.5 * t);
  };
  // Split near zero where the df<2 density is unbounded.
  if (df >= 2.0) return integrate_ref(dens, 0.0, x);
  return integrate_ref(dens, 0.0, 1e-8) + integrate_ref(dens, 1e-8, x);
}

// Closed chi-square CDFs for even/odd small df.
inline double chi2_cdf_df2(double x) { return 1.0 - std::exp(-0.5 * x); }
inline double chi2_cdf_df4(double x) { return 1.0 - std::exp(-0.5 * x) * (1.0 + 0.5 * x); }
inline double chi2_cdf_df3(double x) {
  return std::erf(std::sqrt(0.5 * x)) - std::sqrt(2.0 * x / M_PI) * std::exp(-0.5 * x);
}

// Dense-grid argmax with a parabolic vertex refinement through the winning
// point and its two neighbours (accurate to O(step^2) for smooth maxima).
inline double dense_grid_argmax(const std::function<double(double)>& f, double lo, double hi,
                                long points) {
  const double step = (hi - lo) / static_cast<double>(points - 1);
  long best_i = 0;
  double best_f = f(lo);
  for (long i = 1; i < points; ++i) {
    const double fx = f(lo + step * i);
    if (fx > best_f) {
      best_f = fx;
      best_i = i;
    }
  }
  if (best_i == 0 || best_i == points - 1) return lo + step * best_i;
  const double fm1 = f(lo + step * (best_i - 1));
  const double fp1 = f(lo + step * (best_i + 1));
  const double denom = fm1 - 2.0 * best_f + fp1;
  if (denom >= 0.0) return lo + step * best_i;
  return lo + step * (best_i + 0.5 * (fm1 - fp1) / denom);
}

}  // namespace oracles
