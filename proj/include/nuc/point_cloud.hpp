#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "nuc/geometry.hpp"

namespace nuc {

/// Point set with per-point feature channels. Columns 0..2 are the cartesian
/// x, y, z in meters; further columns (intensity by default) ride along into
/// the voxel aggregation. Labels are raw 32-bit values whose low 16 bits hold
/// the semantic class and whose high 16 bits hold an instance id; an empty
/// vector means the cloud is unlabeled.
struct PointCloud {
  using FeatureMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  FeatureMatrix features;             // N x C, C >= 3
  std::vector<std::uint32_t> labels;  // size N, or empty

  Eigen::Index size() const { return features.rows(); }
  int channels() const { return static_cast<int>(features.cols()); }
  bool has_labels() const { return !labels.empty(); }

  CartesianPoint position(Eigen::Index n) const {
    return {features(n, 0), features(n, 1), features(n, 2)};
  }
  std::uint16_t semantic_label(Eigen::Index n) const {
    return static_cast<std::uint16_t>(labels[n] & 0xffffu);
  }
  std::uint16_t instance_id(Eigen::Index n) const {
    return static_cast<std::uint16_t>(labels[n] >> 16);
  }

  /// Throws std::invalid_argument on non-finite values or a label-count
  /// mismatch; clouds that pass are safe for the whole pipeline.
  void validate() const;
};

}  // namespace nuc
