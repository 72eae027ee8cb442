#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcs/confidence.hpp"
#include "fcs/estimation.hpp"
#include "fcs/forecast.hpp"
#include "fcs/models.hpp"
#include "fcs/scoring.hpp"

namespace fcs {

// Model spec document: {family, params{...}, constraints{...}}.
nlohmann::json model_to_json(const ModelSpec& spec, const ModelParams& params);
std::pair<ModelSpec, ModelParams> model_from_json(const nlohmann::json& doc);

// Fitted model document: {family, theta_hat, vinv_hat (row-major), loglik,
// effective_T}. The data reference is not serialized; readers reattach it.
nlohmann::json fitted_to_json(const FittedModel& fit);
FittedModel fitted_from_json(const nlohmann::json& doc);

void write_fitted_json(const FittedModel& fit, const std::string& path);
FittedModel read_fitted_json(const std::string& path);

// BoundarySet CSV: point_id, x1..xd, param1..paramp, wald_value, feasible.
void write_boundary_csv(const BoundarySet& set, const std::string& path);
BoundarySet read_boundary_csv(const std::string& path);

// FrameSet long CSV (frame_id, y, ordinate, feasible) plus a JSON sidecar.
void write_frames_csv(const FrameSet& set, const std::string& path);
nlohmann::json frames_meta_json(const FrameSet& set);
struct FramesFile {
  std::vector<int> frame_ids;                   // one per frame, -1 plug-in
  std::vector<std::vector<double>> ordinates;   // per frame
  std::vector<double> y_grid;
};
FramesFile read_frames_csv(const std::string& path);

// One plain-text SVG polyline per frame (plus the dashed plug-in overlay).
void write_frames_svg(const FrameSet& set, const std::string& dir);

// ScoreSeries CSV: grid_point_id, ls1, ls2, qs1, qs2, ls_diff, qs_diff.
void write_scores_csv(const ScoreSeries& series, const std::string& path);
ScoreSeries read_scores_csv(const std::string& path);

nlohmann::json coverage_to_json(const CoverageReport& report, const ModelSpec& spec,
                                const Eigen::VectorXd& theta0, std::uint64_t seed);

std::uint64_t fnv1a_hash(const std::string& text);

/// Reproducibility manifest: command, resolved config (execution-environment
/// keys excluded), its hash, the seed and the artifact list.
nlohmann::json make_manifest(const std::string& command, const nlohmann::json& config,
                             std::uint64_t seed, const std::vector<std::string>& artifacts);

void write_json(const nlohmann::json& doc, const std::string& path);
nlohmann::json read_json(const std::string& path);

}  // namespace fcs
