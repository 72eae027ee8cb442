#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fcs {

/// Bad run configuration (unknown family, invalid level, ...). CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data. CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Estimation failure. Carries the best iterate found so far. CLI exit code 4.
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
  EstimationError(const std::string& what, std::vector<double> best, double best_value)
      : std::runtime_error(what), best_theta(std::move(best)), best_loglik(best_value) {}

  std::vector<double> best_theta;
  double best_loglik = 0.0;
};

/// Numerical failure (Cholesky breakdown, quadrature non-convergence, ...).
/// CLI exit code 5.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fcs
