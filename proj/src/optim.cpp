#include "fcs/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "fcs/errors.hpp"

namespace fcs {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

double guarded(const ObjectiveFn& f, const Eigen::VectorXd& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : 1e12;
}
}  // namespace

OptimResult nelder_mead(const ObjectiveFn& f, const Eigen::VectorXd& x0, int max_iters,
                        double f_tol, double x_tol) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (int i = 0; i < n; ++i) {
    // fminsearch-style initial displacement
    simplex[i + 1](i) += (x0(i) != 0.0) ? 0.05 * std::fabs(x0(i)) : 0.00025;
  }
  for (int i = 0; i <= n; ++i) fv[i] = guarded(f, simplex[i]);

  std::vector<int> order(n + 1);
  OptimResult result;
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], worst = order[n], second_worst = order[n - 1];

    double max_x_diff = 0.0;
    for (int i = 1; i <= n; ++i) {
      max_x_diff = std::max(max_x_diff, (simplex[order[i]] - simplex[best]).lpNorm<Eigen::Infinity>());
    }
    if (std::fabs(fv[worst] - fv[best]) <= f_tol * (1.0 + std::fabs(fv[best])) &&
        max_x_diff <= x_tol * (1.0 + simplex[best].lpNorm<Eigen::Infinity>())) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double fr = guarded(f, reflected);
    if (fr < fv[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = guarded(f, expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        fv[worst] = fe;
      } else {
        simplex[worst] = reflected;
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      simplex[worst] = reflected;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const Eigen::VectorXd contracted =
          outside ? (centroid + 0.5 * (reflected - centroid))
                  : (centroid + 0.5 * (simplex[worst] - centroid));
      const double fc = guarded(f, contracted);
      if (fc < std::min(fr, fv[worst])) {
        simplex[worst] = contracted;
        fv[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
          fv[i] = guarded(f, simplex[i]);
        }
      }
    }
  }

  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
  result.x = simplex[order[0]];
  result.f = fv[order[0]];
  result.iterations = iter;
  return result;
}

Eigen::VectorXd numerical_gradient(const ObjectiveFn& f, const Eigen::VectorXd& x) {
  const double h0 = std::sqrt(kEps);
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const double h = h0 * std::max(1.0, std::fabs(x(i)));
    const double save = xp(i);
    xp(i) = save + h;
    const double fp = f(xp);
    xp(i) = save - h;
    const double fm = f(xp);
    xp(i) = save;
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd numerical_hessian(const ObjectiveFn& f, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  const double h0 = std::cbrt(kEps);
  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) h(i) = h0 * std::max(1.0, std::fabs(x(i)));

  Eigen::MatrixXd hess(n, n);
  const double f0 = f(x);
  Eigen::VectorXd xp = x;
  for (int i = 0; i < n; ++i) {
    const double save = xp(i);
    xp(i) = save + h(i);
    const double fp = f(xp);
    xp(i) = save - h(i);
    const double fm = f(xp);
    xp(i) = save;
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h(i) * h(i));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Eigen::VectorXd xq = x;
      xq(i) += h(i); xq(j) += h(j);
      const double fpp = f(xq);
      xq(j) -= 2.0 * h(j);
      const double fpm = f(xq);
      xq(i) -= 2.0 * h(i);
      const double fmm = f(xq);
      xq(j) += 2.0 * h(j);
      const double fmp = f(xq);
      hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h(i) * h(j));
    }
  }
  return hess;
}

OptimResult bfgs(const ObjectiveFn& f, const Eigen::VectorXd& x0, int max_iters, double g_tol) {
  const int n = static_cast<int>(x0.size());
  Eigen::VectorXd x = x0;
  double fx = guarded(f, x);
  Eigen::VectorXd g = numerical_gradient(f, x);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);

  OptimResult result;
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < g_tol) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd dir = -hinv * g;
    double slope = g.dot(dir);
    if (slope >= 0.0) {  // lost curvature; reset to steepest descent
      hinv.setIdentity();
      dir = -g;
      slope = g.dot(dir);
    }
    double step = 1.0;
    double fnew = fx;
    Eigen::VectorXd xnew = x;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      xnew = x + step * dir;
      fnew = guarded(f, xnew);
      if (fnew <= fx + 1e-4 * step * slope) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;

    const Eigen::VectorXd gnew = numerical_gradient(f, xnew);
    const Eigen::VectorXd s = xnew - x;
    const Eigen::VectorXd yv = gnew - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
      hinv = (eye - rho * s * yv.transpose()) * hinv * (eye - rho * yv * s.transpose()) +
             rho * s * s.transpose();
    }
    x = xnew;
    fx = fnew;
    g = gnew;
  }
  result.x = x;
  result.f = fx;
  result.iterations = iter;
  if (!result.converged) result.converged = g.lpNorm<Eigen::Infinity>() < g_tol;
  return result;
}

double golden_section_max(const std::function<double(double)>& g, double lo, double hi,
                          double rel_tol) {
  if (!(hi > lo)) throw NumericError("golden_section_max: empty interval");
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  while (b - a > rel_tol * std::max(1.0, std::fabs(a) + std::fabs(b))) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = g(x1);
    }
  }
  return 0.5 * (a + b);
}

double brent_root(const std::function<double(double)>& f, double lo, double hi, double x_tol,
                  int max_iters) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw NumericError("brent_root: root not bracketed");
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < max_iters; ++it) {
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::fabs(b) + 0.5 * x_tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

}  // namespace fcs
