#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nuc/config.hpp"
#include "nuc/point_cloud.hpp"

namespace nuc {

/// Result of reading a .bin scan. Records with non-finite values are skipped,
/// not fatal; `kept` maps cloud rows back to file records and stays empty when
/// nothing was rejected.
struct LoadedScan {
  PointCloud cloud;
  std::uint64_t raw_points = 0;
  std::uint64_t rejected_points = 0;
  std::vector<std::uint64_t> kept;
};

/// Reads consecutive records of four float32 little-endian values
/// (x, y, z, intensity). The file length must be a multiple of 16 bytes.
LoadedScan read_scan(const std::filesystem::path& path);

/// Reads one uint32 little-endian record per point; low 16 bits are the
/// semantic class, high 16 the instance id. The file must be exactly
/// 4 * expected_points bytes.
std::vector<std::uint32_t> read_labels(const std::filesystem::path& path,
                                       std::uint64_t expected_points);

/// read_labels sized by the scan's raw record count, aligned onto the kept
/// rows and attached to the cloud.
void attach_labels(LoadedScan& scan, const std::filesystem::path& path);

void write_scan(const PointCloud& cloud, const std::filesystem::path& path);
void write_labels(const PointCloud& cloud, const std::filesystem::path& path);

/// Radial annulus [previous outer, outer_radius) carrying one class id.
struct AnnulusClass {
  double outer_radius = 0.0;
  std::uint16_t class_id = 0;
};

/// Beam model for synthetic scans: equally spaced elevation angles below the
/// horizon, each hitting a ground plane sensor_height below the origin, with
/// uniform azimuth sampling, range jitter and range-dependent dropout. Near
/// rings end up far denser than far ones, like a spinning automotive LiDAR.
struct SynthesisSpec {
  int beam_count = 64;
  int azimuth_samples = 1800;
  double max_range = 50.0;
  double elevation_min_deg = -24.8;
  double elevation_max_deg = -2.0;
  double sensor_height = 1.73;
  /// Classes by annulus; a radius maps to the first annulus whose outer
  /// radius exceeds it, and to the last class beyond all of them.
  std::vector<AnnulusClass> classes{{15.0, 1}, {30.0, 2}, {50.0, 3}};
  /// Keep probability decays linearly to 1 - dropout_rate at max_range.
  double dropout_rate = 0.3;
  double range_jitter = 0.02;   // meters, uniform, so each beam draws a ring
  double ground_jitter = 0.03;  // meters of z roughness
  std::uint64_t seed = 1;

  /// Imbalanced three-class scene used for density and count diagnostics.
  static SynthesisSpec kitti_like(std::uint64_t seed = 1);
  /// Two classes alternating in 1.3 m annuli; every annulus edge cuts through
  /// voxels, which is what drives label round-trip error.
  static SynthesisSpec two_class_boundary(std::uint64_t seed = 42);

  void validate() const;
};

/// Deterministic function of the spec: the same spec always yields a
/// byte-identical cloud.
PointCloud generate_synthetic(const SynthesisSpec& spec);

GridConfig load_config(const std::filesystem::path& path);
void save_config(const GridConfig& config, const std::filesystem::path& path);

}  // namespace nuc
