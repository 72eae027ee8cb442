#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fcs/forecast.hpp"

namespace fcs {

/// Matched log- and quadratic-score values for two models over one boundary
/// traversal, plus their pairwise differences.
struct ScoreSeries {
  std::vector<int> grid_point_ids;
  std::vector<double> ls1, ls2, qs1, qs2, ls_diff, qs_diff;
  double realized = 0.0;
  Target target = Target::Return;
};

/// log f(realized); -inf sentinel when the ordinate vanishes.
double log_score(const ForecastDensity& density, double realized);

/// 2 f(realized) - integral of f^2.
double quadratic_score(const ForecastDensity& density, double realized);

/// Closed-form log-score difference for the return target, each eta being
/// (mu_{T+1}, beta_{T+1}, sigmaV2).
double ls_diff_closed_form(const Eigen::Vector3d& eta1, const Eigen::Vector3d& eta2,
                           double realized_r);

/// Per-grid-point scores for two frame sets built over the same sphere grid
/// in the same direction. Return-target log-score differences are
/// cross-checked against the closed form.
ScoreSeries score_difference_series(const FrameSet& frames1, const FrameSet& frames2,
                                    double realized);

}  // namespace fcs
