#include "nuc/voxelizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>
#include <utility>

namespace nuc {

void PointCloud::validate() const {
  if (channels() < 3 && size() > 0) {
    throw std::invalid_argument("point cloud needs at least x, y, z channels");
  }
  if (!features.allFinite()) {
    throw std::invalid_argument("point cloud contains non-finite values");
  }
  if (has_labels() && static_cast<Eigen::Index>(labels.size()) != size()) {
    throw std::invalid_argument("label array length does not match point count");
  }
}

ScaleLevel::ScaleLevel(int n_r, int n_phi, int n_z, RadialBoundaries boundaries,
                       std::vector<VoxelRecord> voxels)
    : n_r_(n_r),
      n_phi_(n_phi),
      n_z_(n_z),
      boundaries_(std::move(boundaries)),
      voxels_(std::move(voxels)) {
  if (boundaries_.bin_count() != n_r_) {
    throw config_error("scale level: boundary bin count does not match n_r");
  }
  for (const VoxelRecord& rec : voxels_) {
    const VoxelIndex v = rec.index;
    if (v.i < 0 || v.i >= n_r_ || v.j < 0 || v.j >= n_phi_ || v.k < 0 || v.k >= n_z_) {
      throw config_error("scale level: voxel index outside grid");
    }
  }
  for (const VoxelRecord& rec : voxels_) {
    if (rec.point_count == 0) {
      throw config_error("scale level: empty voxels are never stored");
    }
    if (rec.feature.size() != voxels_.front().feature.size()) {
      throw config_error("scale level: voxels disagree on channel count");
    }
  }
  std::sort(voxels_.begin(), voxels_.end(), [this](const VoxelRecord& a, const VoxelRecord& b) {
    return linear_key(a.index) < linear_key(b.index);
  });
  lookup_.reserve(voxels_.size());
  for (std::uint32_t pos = 0; pos < voxels_.size(); ++pos) {
    if (!lookup_.emplace(linear_key(voxels_[pos].index), pos).second) {
      throw config_error("scale level: duplicate voxel index");
    }
  }
}

const VoxelRecord* ScaleLevel::find(VoxelIndex v) const {
  if (v.i < 0 || v.i >= n_r_ || v.j < 0 || v.j >= n_phi_ || v.k < 0 || v.k >= n_z_) {
    return nullptr;
  }
  const auto it = lookup_.find(linear_key(v));
  return it == lookup_.end() ? nullptr : &voxels_[it->second];
}

SparseVoxelGrid::SparseVoxelGrid(GridConfig config, bool has_labels,
                                 std::vector<ScaleLevel> levels, std::uint64_t accepted_points,
                                 std::uint64_t dropped_points)
    : config_(std::move(config)),
      has_labels_(has_labels),
      accepted_points_(accepted_points),
      dropped_points_(dropped_points),
      levels_(std::move(levels)) {
  if (levels_.empty()) throw config_error("sparse grid: need at least one scale level");
  for (const ScaleLevel& level : levels_) {
    std::uint64_t total = 0;
    for (const VoxelRecord& rec : level.voxels()) total += rec.point_count;
    if (total != accepted_points_) {
      throw config_error("sparse grid: per-scale point counts do not sum to the accepted total");
    }
  }
}

Eigen::VectorXf SparseVoxelGrid::concatenated_feature(VoxelIndex finest) const {
  const VoxelRecord* base = levels_[0].find(finest);
  if (base == nullptr) {
    throw std::out_of_range("concatenated_feature: voxel is empty or outside the grid");
  }
  const Eigen::Index channels = base->feature.size();
  Eigen::VectorXf out(channels * static_cast<Eigen::Index>(levels_.size()));
  for (int s = 0; s < scale_count(); ++s) {
    const VoxelIndex coarse{finest.i >> s, finest.j >> s, finest.k >> s};
    const VoxelRecord* rec = levels_[s].find(coarse);
    if (rec == nullptr) {
      // Ancestors of a non-empty voxel are never empty in a built grid; a
      // deserialized one may disagree with itself.
      throw config_error("concatenated_feature: missing ancestor voxel at scale " +
                         std::to_string(s));
    }
    out.segment(s * channels, channels) = rec->feature;
  }
  return out;
}

namespace {

// Angular + height binning shared by voxel_index and the hot loop; the radial
// bin has already been resolved (or not) by the caller.
std::optional<VoxelIndex> finish_index(const CylindricalPoint& p, const GridConfig& config,
                                       std::optional<int> radial) {
  if (!radial) return std::nullopt;

  const double phi = wrap_angle(p.phi);
  int j = static_cast<int>((phi + kPi) / config.angular_bin_width());
  j = std::min(j, config.n_phi - 1);  // guards the rounded-up upper edge

  int k;
  if (p.z >= config.z_min && p.z < config.z_max) {
    k = static_cast<int>((p.z - config.z_min) / config.height_bin_width());
    k = std::min(k, config.n_z - 1);
  } else {
    if (config.out_of_range == OutOfRangePolicy::Drop) return std::nullopt;
    k = p.z < config.z_min ? 0 : config.n_z - 1;
  }
  return VoxelIndex{*radial, j, k};
}

}  // namespace

std::optional<VoxelIndex> voxel_index(const CylindricalPoint& p, const GridConfig& config,
                                      const RadialBoundaries& b) {
  return finish_index(p, config, radial_index(b, p.r, config.out_of_range));
}

namespace {

// Per-voxel running aggregate. The label histogram is an ordered map so the
// majority scan visits class ids ascending and ties resolve to the smallest.
struct Accum {
  std::uint32_t count = 0;
  Eigen::VectorXf max_feature;
  std::map<std::uint16_t, std::uint32_t> label_hist;
};

using AccumMap = std::unordered_map<std::uint64_t, Accum>;

struct WorkerOutput {
  std::vector<AccumMap> per_scale;
  std::uint64_t accepted = 0;
};

// Radial lookup with the O(1) api path when available.
struct RadialLookup {
  const RadialBoundaries* boundaries;
  OutOfRangePolicy policy;
  std::optional<ApiRadialLookup> api;

  std::optional<int> operator()(double r) const {
    return api ? (*api)(r, policy) : radial_index(*boundaries, r, policy);
  }
};

WorkerOutput accumulate_range(const PointCloud& cloud, const GridConfig& config,
                              const RadialLookup& lookup, Eigen::Index begin, Eigen::Index end) {
  const int t = config.scales;
  WorkerOutput out;
  out.per_scale.resize(t);
  for (auto& m : out.per_scale) m.reserve(1 << 12);

  const bool labeled = cloud.has_labels();
  for (Eigen::Index n = begin; n < end; ++n) {
    const CylindricalPoint q = to_cylindrical(cloud.position(n));
    const auto idx = finish_index(q, config, lookup(q.r));
    if (!idx) continue;
    ++out.accepted;

    for (int s = 0; s < t; ++s) {
      const VoxelIndex vs{idx->i >> s, idx->j >> s, idx->k >> s};
      const std::uint64_t key =
          (static_cast<std::uint64_t>(vs.i) * (config.n_phi >> s) + vs.j) * (config.n_z >> s) +
          vs.k;
      Accum& acc = out.per_scale[s][key];
      if (acc.count == 0) {
        acc.max_feature = cloud.features.row(n).transpose();
      } else {
        acc.max_feature = acc.max_feature.cwiseMax(cloud.features.row(n).transpose());
      }
      ++acc.count;
      if (labeled) ++acc.label_hist[cloud.semantic_label(n)];
    }
  }
  return out;
}

void merge_into(AccumMap& dst, AccumMap& src) {
  for (auto& [key, acc] : src) {
    auto [it, inserted] = dst.try_emplace(key, std::move(acc));
    if (inserted) continue;
    Accum& d = it->second;
    d.count += acc.count;
    d.max_feature = d.max_feature.cwiseMax(acc.max_feature);
    for (const auto& [cls, cnt] : acc.label_hist) d.label_hist[cls] += cnt;
  }
}

std::uint16_t majority_class(const std::map<std::uint16_t, std::uint32_t>& hist) {
  std::uint16_t best = 0;
  std::uint32_t best_count = 0;
  for (const auto& [cls, cnt] : hist) {
    if (cnt > best_count) {
      best = cls;
      best_count = cnt;
    }
  }
  return best;
}

}  // namespace

SparseVoxelGrid voxelize(const PointCloud& cloud, const GridConfig& config, int workers) {
  config.validate();
  cloud.validate();
  if (workers < 1) throw std::invalid_argument("voxelize: workers must be >= 1");
  if (config.scales > 1 && !std::holds_alternative<Api>(config.scheme)) {
    throw config_error("multi-scale aggregation requires the api scheme, got " +
                       scheme_name(config.scheme));
  }

  const RadialBoundaries base = build_boundaries(config);
  RadialLookup lookup{&base, config.out_of_range, std::nullopt};
  if (const auto* api = std::get_if<Api>(&config.scheme)) {
    lookup.api.emplace(*api, base);
  }

  const Eigen::Index n_points = cloud.size();
  const int t = config.scales;

  std::vector<WorkerOutput> parts;
  if (workers == 1 || n_points < 2) {
    parts.push_back(accumulate_range(cloud, config, lookup, 0, n_points));
  } else {
    parts.resize(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const Eigen::Index chunk = (n_points + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const Eigen::Index begin = std::min<Eigen::Index>(w * chunk, n_points);
      const Eigen::Index end = std::min<Eigen::Index>(begin + chunk, n_points);
      pool.emplace_back([&, w, begin, end] {
        parts[w] = accumulate_range(cloud, config, lookup, begin, end);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::uint64_t accepted = 0;
  for (auto& p : parts) accepted += p.accepted;
  for (std::size_t w = 1; w < parts.size(); ++w) {
    for (int s = 0; s < t; ++s) merge_into(parts[0].per_scale[s], parts[w].per_scale[s]);
  }

  std::vector<ScaleLevel> levels;
  levels.reserve(t);
  for (int s = 0; s < t; ++s) {
    const int n_phi_s = config.n_phi >> s;
    const int n_z_s = config.n_z >> s;
    AccumMap& acc = parts[0].per_scale[s];

    std::vector<VoxelRecord> records;
    records.reserve(acc.size());
    const std::uint64_t phi_z = static_cast<std::uint64_t>(n_phi_s) * n_z_s;
    for (auto& [key, a] : acc) {
      VoxelRecord rec;
      rec.index = VoxelIndex{static_cast<int>(key / phi_z),
                             static_cast<int>((key / n_z_s) % n_phi_s),
                             static_cast<int>(key % n_z_s)};
      rec.point_count = a.count;
      rec.majority_label = cloud.has_labels() ? majority_class(a.label_hist) : 0;
      rec.feature = std::move(a.max_feature);
      records.push_back(std::move(rec));
    }
    levels.emplace_back(config.n_r >> s, n_phi_s, n_z_s, multiscale_boundaries(base, s),
                        std::move(records));
  }

  return SparseVoxelGrid(config, cloud.has_labels(), std::move(levels), accepted,
                         static_cast<std::uint64_t>(n_points) - accepted);
}

SparseVoxelGrid multiscale_voxelize(const PointCloud& cloud, const GridConfig& config,
                                    int workers) {
  return voxelize(cloud, config, workers);
}

std::vector<std::int32_t> decode_labels(const SparseVoxelGrid& grid, const PointCloud& cloud) {
  if (!grid.has_labels()) {
    throw config_error("decode_labels: grid was built without labels");
  }
  cloud.validate();
  const GridConfig& config = grid.config();
  const ScaleLevel& level = grid.level(0);

  std::vector<std::int32_t> out(cloud.size(), -1);
  std::uint64_t accepted = 0;
  for (Eigen::Index n = 0; n < cloud.size(); ++n) {
    const auto idx = voxel_index(to_cylindrical(cloud.position(n)), config, level.boundaries());
    if (!idx) continue;
    const VoxelRecord* rec = level.find(*idx);
    if (rec == nullptr) {
      throw config_error("decode_labels: point falls in an empty voxel; cloud does not match grid");
    }
    out[n] = rec->majority_label;
    ++accepted;
  }
  if (accepted != grid.accepted_points()) {
    std::ostringstream os;
    os << "decode_labels: accepted-point mismatch, cloud has " << accepted
       << " but grid was built from " << grid.accepted_points();
    throw config_error(os.str());
  }
  return out;
}

}  // namespace nuc
