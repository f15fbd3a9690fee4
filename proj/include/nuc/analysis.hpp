#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nuc/voxelizer.hpp"

namespace nuc {

/// Half-open distance bands [edges[b], edges[b+1]); radii at or past the last
/// edge belong to no band and are tallied separately as "outside".
struct DistanceBands {
  std::vector<double> edges{0.0, 10.0, 20.0, 30.0, 40.0, 50.0};

  int count() const { return static_cast<int>(edges.size()) - 1; }
  std::optional<int> band_of(double r) const;
  void validate() const;
};

/// Point-level label round-trip error. Overall rows are the band sums;
/// whatever lies past the last band edge is kept in the outside_* fields so
/// the band tallies always add up.
struct EncodingErrorReport {
  std::vector<std::uint64_t> band_points;
  std::vector<std::uint64_t> band_misencoded;
  std::vector<std::optional<double>> per_band;  // absent when the band saw no points
  std::uint64_t points = 0;
  std::uint64_t misencoded = 0;
  double overall = 0.0;
  std::uint64_t outside_points = 0;
  std::uint64_t outside_misencoded = 0;
};

/// Voxelizes, decodes and compares labels per point. Requires a labeled
/// cloud. With exclude_ignore, points whose true class is 0 stay out of the
/// tallies; they still vote in the voxels.
EncodingErrorReport encoding_error(const PointCloud& cloud, const GridConfig& config,
                                   const DistanceBands& bands, int workers = 1,
                                   bool exclude_ignore = false);

/// Mean point_count over non-empty voxels whose radial-bin midpoint lies in
/// each band; absent for bands without voxels.
std::vector<std::optional<double>> density_profile(const SparseVoxelGrid& grid,
                                                   const DistanceBands& bands);

struct NonemptyCounts {
  std::vector<std::uint64_t> per_band;
  std::uint64_t overall = 0;  // sum of per_band
  std::uint64_t outside = 0;  // voxels whose midpoint is past the last edge
};

/// Stored-voxel counts per band by radial-bin midpoint.
NonemptyCounts nonempty_counts(const SparseVoxelGrid& grid, const DistanceBands& bands);

/// receptive_length at the bin containing each sample distance; distances at
/// or past the last boundary evaluate at the last bin.
std::vector<std::pair<double, double>> receptive_profile(
    const GridConfig& config, const std::vector<double>& sample_distances);

/// Every diagnostic for one configuration over one cloud.
struct AnalysisReport {
  std::string scheme;
  GridConfig config;
  DistanceBands bands;
  std::uint64_t accepted_points = 0;
  std::uint64_t dropped_points = 0;
  std::optional<EncodingErrorReport> encoding;  // absent for unlabeled clouds
  std::vector<std::optional<double>> mean_points_per_cell;
  NonemptyCounts counts;
  std::vector<std::pair<double, double>> receptive;  // distance -> meters
  std::vector<double> volume_profile;                // radial index -> m^3
};

/// Sample distances used by analyze when none are given: 1 m steps through
/// the band range, offset to bin interiors.
std::vector<double> default_sample_distances(const DistanceBands& bands);

AnalysisReport analyze(const PointCloud& cloud, const GridConfig& config,
                       const DistanceBands& bands, int workers = 1,
                       bool exclude_ignore = false);

struct SchemeComparison {
  std::vector<AnalysisReport> reports;  // one per config, config order
  /// Config positions sorted ascending by the ranking metric; ties keep
  /// config order. Empty error ranking when the cloud is unlabeled.
  std::vector<int> rank_by_encoding_error;
  std::vector<int> rank_by_nonempty;
};

SchemeComparison compare_schemes(const PointCloud& cloud, const std::vector<GridConfig>& configs,
                                 const DistanceBands& bands, int workers = 1,
                                 bool exclude_ignore = false);

}  // namespace nuc
