#include "fcs/scoring.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "fcs/errors.hpp"

namespace fcs {

double log_score(const ForecastDensity& density, double realized) {
  if (!(density.pdf(realized) > 0.0)) return -std::numeric_limits<double>::infinity();
  return density.log_pdf(realized);
}

double quadratic_score(const ForecastDensity& density, double realized) {
  return 2.0 * density.pdf(realized) - density.sq_integral();
}

double ls_diff_closed_form(const Eigen::Vector3d& eta1, const Eigen::Vector3d& eta2,
                           double realized_r) {
  if (!(eta1(2) > 0.0 && eta2(2) > 0.0)) {
    throw std::domain_error("ls_diff_closed_form: sigmaV2 must be positive");
  }
  const double d1 = realized_r - eta1(0);
  const double d2 = realized_r - eta2(0);
  return 0.5 * (eta2(1) - eta1(1)) + 0.25 * (eta2(2) - eta1(2)) +
         0.5 * d2 * d2 * std::exp(-(eta2(1) + 0.5 * eta2(2))) -
         0.5 * d1 * d1 * std::exp(-(eta1(1) + 0.5 * eta1(2)));
}

ScoreSeries score_difference_series(const FrameSet& frames1, const FrameSet& frames2,
                                    double realized) {
  if (frames1.grid_hash != frames2.grid_hash) {
    throw ConfigError("score_difference_series: frame sets built on different sphere grids");
  }
  if (frames1.target != frames2.target || frames1.eta_space != frames2.eta_space) {
    throw ConfigError("score_difference_series: frame sets are not comparable");
  }

  std::unordered_map<int, std::size_t> index2;
  for (std::size_t k = 0; k < frames2.curves.size(); ++k) {
    index2.emplace(frames2.curves[k].param_point_id, k);
  }

  const bool check_closed_form = frames1.target == Target::Return && frames1.eta_space;
  ScoreSeries series;
  series.realized = realized;
  series.target = frames1.target;
  for (std::size_t k1 = 0; k1 < frames1.curves.size(); ++k1) {
    const int id = frames1.curves[k1].param_point_id;
    const auto hit = index2.find(id);
    if (hit == index2.end()) continue;
    const std::size_t k2 = hit->second;

    const double l1 = log_score(frames1.curve_densities[k1], realized);
    const double l2 = log_score(frames2.curve_densities[k2], realized);
    const double q1 = quadratic_score(frames1.curve_densities[k1], realized);
    const double q2 = quadratic_score(frames2.curve_densities[k2], realized);
    const double ldiff = l1 - l2;
    if (check_closed_form && std::isfinite(ldiff)) {
      const double closed = ls_diff_closed_form(frames1.curve_params[k1].head<3>(),
                                                frames2.curve_params[k2].head<3>(), realized);
      if (std::fabs(closed - ldiff) > 1e-9 * (1.0 + std::fabs(ldiff))) {
        throw NumericError("score_difference_series: closed-form cross-check failed");
      }
    }
    series.grid_point_ids.push_back(id);
    series.ls1.push_back(l1);
    series.ls2.push_back(l2);
    series.qs1.push_back(q1);
    series.qs2.push_back(q2);
    series.ls_diff.push_back(ldiff);
    series.qs_diff.push_back(q1 - q2);
  }
  if (series.grid_point_ids.empty()) {
    throw NumericError("score_difference_series: no common feasible grid points");
  }
  return series;
}

}  // namespace fcs
