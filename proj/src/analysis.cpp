#include "nuc/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace nuc {

std::optional<int> DistanceBands::band_of(double r) const {
  if (r < edges.front() || r >= edges.back()) return std::nullopt;
  const auto it = std::upper_bound(edges.begin(), edges.end(), r);
  return static_cast<int>(it - edges.begin()) - 1;
}

void DistanceBands::validate() const {
  if (edges.size() < 2) throw config_error("distance bands need at least 2 edges");
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    if (!(edges[b] < edges[b + 1])) {
      throw config_error("distance band edges must be strictly increasing");
    }
  }
}

namespace {

EncodingErrorReport tally_encoding(const PointCloud& cloud,
                                   const std::vector<std::int32_t>& decoded,
                                   const DistanceBands& bands, bool exclude_ignore) {
  EncodingErrorReport rep;
  rep.band_points.assign(bands.count(), 0);
  rep.band_misencoded.assign(bands.count(), 0);
  for (Eigen::Index n = 0; n < cloud.size(); ++n) {
    if (decoded[n] < 0) continue;  // dropped
    if (exclude_ignore && cloud.semantic_label(n) == 0) continue;
    const bool wrong = decoded[n] != static_cast<std::int32_t>(cloud.semantic_label(n));
    const CartesianPoint p = cloud.position(n);
    const double r = std::sqrt(p.x * p.x + p.y * p.y);
    if (const auto band = bands.band_of(r)) {
      ++rep.band_points[*band];
      if (wrong) ++rep.band_misencoded[*band];
    } else {
      ++rep.outside_points;
      if (wrong) ++rep.outside_misencoded;
    }
  }
  rep.per_band.resize(bands.count());
  for (int b = 0; b < bands.count(); ++b) {
    rep.points += rep.band_points[b];
    rep.misencoded += rep.band_misencoded[b];
    if (rep.band_points[b] > 0) {
      rep.per_band[b] = static_cast<double>(rep.band_misencoded[b]) / rep.band_points[b];
    }
  }
  rep.overall = rep.points > 0 ? static_cast<double>(rep.misencoded) / rep.points : 0.0;
  return rep;
}

}  // namespace

EncodingErrorReport encoding_error(const PointCloud& cloud, const GridConfig& config,
                                   const DistanceBands& bands, int workers,
                                   bool exclude_ignore) {
  if (!cloud.has_labels()) throw config_error("encoding_error: cloud has no labels");
  bands.validate();
  const SparseVoxelGrid grid = voxelize(cloud, config, workers);
  return tally_encoding(cloud, decode_labels(grid, cloud), bands, exclude_ignore);
}

std::vector<std::optional<double>> density_profile(const SparseVoxelGrid& grid,
                                                   const DistanceBands& bands) {
  bands.validate();
  const ScaleLevel& level = grid.level(0);
  std::vector<std::uint64_t> voxels(bands.count(), 0);
  std::vector<std::uint64_t> points(bands.count(), 0);
  for (const VoxelRecord& rec : level.voxels()) {
    if (const auto band = bands.band_of(level.boundaries().midpoint(rec.index.i))) {
      ++voxels[*band];
      points[*band] += rec.point_count;
    }
  }
  std::vector<std::optional<double>> out(bands.count());
  for (int b = 0; b < bands.count(); ++b) {
    if (voxels[b] > 0) out[b] = static_cast<double>(points[b]) / voxels[b];
  }
  return out;
}

NonemptyCounts nonempty_counts(const SparseVoxelGrid& grid, const DistanceBands& bands) {
  bands.validate();
  const ScaleLevel& level = grid.level(0);
  NonemptyCounts out;
  out.per_band.assign(bands.count(), 0);
  for (const VoxelRecord& rec : level.voxels()) {
    if (const auto band = bands.band_of(level.boundaries().midpoint(rec.index.i))) {
      ++out.per_band[*band];
    } else {
      ++out.outside;
    }
  }
  for (std::uint64_t c : out.per_band) out.overall += c;
  return out;
}

std::vector<std::pair<double, double>> receptive_profile(
    const GridConfig& config, const std::vector<double>& sample_distances) {
  const RadialBoundaries b = build_boundaries(config);
  std::vector<std::pair<double, double>> out;
  out.reserve(sample_distances.size());
  for (double r : sample_distances) {
    const int i = *radial_index(b, r, OutOfRangePolicy::ClampToEdge);
    out.emplace_back(r, receptive_length(b, i));
  }
  return out;
}

std::vector<double> default_sample_distances(const DistanceBands& bands) {
  std::vector<double> out;
  for (double r = bands.edges.front() + 0.5; r < bands.edges.back(); r += 1.0) {
    out.push_back(r);
  }
  return out;
}

AnalysisReport analyze(const PointCloud& cloud, const GridConfig& config,
                       const DistanceBands& bands, int workers, bool exclude_ignore) {
  bands.validate();
  AnalysisReport rep;
  rep.scheme = scheme_name(config.scheme);
  rep.config = config;
  rep.bands = bands;

  const SparseVoxelGrid grid = voxelize(cloud, config, workers);
  rep.accepted_points = grid.accepted_points();
  rep.dropped_points = grid.dropped_points();
  if (cloud.has_labels()) {
    // Reuses the grid built above rather than voxelizing a second time.
    rep.encoding = tally_encoding(cloud, decode_labels(grid, cloud), bands, exclude_ignore);
  }
  rep.mean_points_per_cell = density_profile(grid, bands);
  rep.counts = nonempty_counts(grid, bands);
  rep.receptive = receptive_profile(config, default_sample_distances(bands));

  const RadialBoundaries& b = grid.level(0).boundaries();
  rep.volume_profile.reserve(config.n_r);
  for (int i = 0; i < config.n_r; ++i) {
    rep.volume_profile.push_back(cell_volume(b, i, 0, 0, config));
  }
  return rep;
}

SchemeComparison compare_schemes(const PointCloud& cloud, const std::vector<GridConfig>& configs,
                                 const DistanceBands& bands, int workers, bool exclude_ignore) {
  if (configs.empty()) throw config_error("compare_schemes: need at least one config");
  SchemeComparison cmp;
  cmp.reports.reserve(configs.size());
  for (const GridConfig& config : configs) {
    cmp.reports.push_back(analyze(cloud, config, bands, workers, exclude_ignore));
  }

  std::vector<int> order(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) order[c] = static_cast<int>(c);

  cmp.rank_by_nonempty = order;
  std::stable_sort(cmp.rank_by_nonempty.begin(), cmp.rank_by_nonempty.end(),
                   [&](int a, int b) {
                     return cmp.reports[a].counts.overall + cmp.reports[a].counts.outside <
                            cmp.reports[b].counts.overall + cmp.reports[b].counts.outside;
                   });
  if (cloud.has_labels()) {
    cmp.rank_by_encoding_error = order;
    std::stable_sort(cmp.rank_by_encoding_error.begin(), cmp.rank_by_encoding_error.end(),
                     [&](int a, int b) {
                       return cmp.reports[a].encoding->overall < cmp.reports[b].encoding->overall;
                     });
  }
  return cmp;
}

}  // namespace nuc
