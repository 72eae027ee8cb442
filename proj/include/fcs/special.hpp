#pragma once

namespace fcs {

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double gammp(double a, double x);

// Regularized incomplete beta I_x(a, b).
double betai(double a, double b, double x);

double normal_pdf(double x);
double normal_pdf(double x, double mu, double sigma2);
double normal_cdf(double x);

// Inverse standard normal CDF (Wichura's AS 241, PPND16 precision).
double normal_quantile(double p);

// Density of log-normal LN(beta, sigma2) at x > 0 (location/scale on the log).
double lognormal_pdf(double x, double beta, double sigma2);
double lognormal_log_pdf(double x, double beta, double sigma2);

double chi2_cdf(double x, double df);

double student_t_cdf(double t, double v);
double student_t_quantile(double p, double v);

}  // namespace fcs
