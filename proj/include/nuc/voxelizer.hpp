#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "nuc/partition.hpp"
#include "nuc/point_cloud.hpp"

namespace nuc {

struct VoxelIndex {
  int i = 0;  // radial bin
  int j = 0;  // angular bin
  int k = 0;  // height bin

  bool operator==(const VoxelIndex&) const = default;
};

/// One stored (non-empty) voxel.
struct VoxelRecord {
  VoxelIndex index;
  std::uint32_t point_count = 0;
  /// Modal semantic class of the member points, smallest id on ties.
  /// 0 when the grid was built without labels.
  std::uint16_t majority_label = 0;
  Eigen::VectorXf feature;  // channel-wise max over member points
};

/// One resolution level of the sparse grid. Voxels are kept sorted by linear
/// key (i major, then j, then k) so iteration order is reproducible.
class ScaleLevel {
 public:
  /// Takes ownership of the records, sorts them by linear key and indexes
  /// them. Throws on out-of-range or duplicate voxel indices.
  ScaleLevel(int n_r, int n_phi, int n_z, RadialBoundaries boundaries,
             std::vector<VoxelRecord> voxels);

  int n_r() const { return n_r_; }
  int n_phi() const { return n_phi_; }
  int n_z() const { return n_z_; }
  const RadialBoundaries& boundaries() const { return boundaries_; }
  const std::vector<VoxelRecord>& voxels() const { return voxels_; }

  std::uint64_t linear_key(VoxelIndex v) const {
    return (static_cast<std::uint64_t>(v.i) * n_phi_ + v.j) * n_z_ + v.k;
  }
  const VoxelRecord* find(VoxelIndex v) const;

 private:
  int n_r_;
  int n_phi_;
  int n_z_;
  RadialBoundaries boundaries_;
  std::vector<VoxelRecord> voxels_;
  std::unordered_map<std::uint64_t, std::uint32_t> lookup_;
};

/// Immutable voxelization result. level(0) is the finest grid; coarser levels
/// exist when the config asked for scales > 1.
class SparseVoxelGrid {
 public:
  SparseVoxelGrid(GridConfig config, bool has_labels, std::vector<ScaleLevel> levels,
                  std::uint64_t accepted_points, std::uint64_t dropped_points);

  const GridConfig& config() const { return config_; }
  bool has_labels() const { return has_labels_; }
  int scale_count() const { return static_cast<int>(levels_.size()); }
  const ScaleLevel& level(int s = 0) const { return levels_.at(s); }
  std::uint64_t accepted_points() const { return accepted_points_; }
  std::uint64_t dropped_points() const { return dropped_points_; }
  std::size_t voxel_count(int s = 0) const { return levels_.at(s).voxels().size(); }

  /// Broadcast-on-read pyramid feature for a finest-level voxel:
  /// [scale-0 max | scale-1 max of its ancestor | ...], length scales * C.
  Eigen::VectorXf concatenated_feature(VoxelIndex finest) const;

 private:
  GridConfig config_;
  bool has_labels_;
  std::uint64_t accepted_points_;
  std::uint64_t dropped_points_;
  std::vector<ScaleLevel> levels_;
};

/// Bins a cylindrical point. Angular bins are floor((phi+pi)/(2pi/n_phi))
/// with phi = pi wrapping to the -pi edge bin; height bins are half-open in
/// [z_min, z_max). nullopt when the point is out of range under Drop.
std::optional<VoxelIndex> voxel_index(const CylindricalPoint& p, const GridConfig& config,
                                      const RadialBoundaries& b);

/// Assigns every point to one voxel per scale and aggregates features by
/// channel-wise max and labels by majority vote. The result is identical for
/// any worker count: partial grids merge through max / sum / histogram-sum,
/// all associative and commutative.
SparseVoxelGrid voxelize(const PointCloud& cloud, const GridConfig& config, int workers = 1);

/// voxelize with the multi-scale preconditions spelled out: requires the api
/// scheme when config.scales > 1 and resolutions divisible by 2^(scales-1).
/// With scales = 1 this is exactly voxelize.
SparseVoxelGrid multiscale_voxelize(const PointCloud& cloud, const GridConfig& config,
                                    int workers = 1);

/// Voxel-encoding round trip: every point inherits the majority label of its
/// finest-level voxel. Dropped points come back as -1. Throws config_error
/// when the grid has no labels or the cloud does not match the grid.
std::vector<std::int32_t> decode_labels(const SparseVoxelGrid& grid, const PointCloud& cloud);

}  // namespace nuc
