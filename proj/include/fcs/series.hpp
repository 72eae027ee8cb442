#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fcs {

enum class SeriesKind { Univariate, ReturnsVariance };

/// Observed sample. Either a univariate series y (optionally with observed
/// 0/1 states d of equal length) or a (returns, realized variance) pair.
struct SeriesData {
  SeriesKind kind = SeriesKind::Univariate;
  std::vector<double> y;
  std::vector<int> d;
  std::vector<double> r;
  std::vector<double> v;

  std::size_t size() const { return kind == SeriesKind::Univariate ? y.size() : r.size(); }
  bool has_states() const { return !d.empty(); }

  /// Throws DataError on length mismatches, non-positive variances, or
  /// states outside {0, 1}.
  void validate() const;
};

/// Reads a headered CSV with columns "t,y", "t,y,d" or "t,r,v".
SeriesData read_series_csv(const std::string& path);

void write_series_csv(const SeriesData& data, const std::string& path);

/// Deterministic shortest-round-trip formatting used by every CSV writer.
std::string format_double(double x);

}  // namespace fcs
