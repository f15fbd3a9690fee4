#pragma once

#include <numbers>

#include "nuc/scheme.hpp"

namespace nuc {

/// What happens to points past the last radial boundary or outside [z_min, z_max).
enum class OutOfRangePolicy { ClampToEdge, Drop };

struct GridConfig {
  int n_r = 120;
  int n_phi = 360;
  int n_z = 32;
  double z_min = -4.0;
  double z_max = 2.0;
  /// Distance-band and synthesis bound. Uniform spreads its bins over
  /// [0, r_max]; parametric schemes are NOT rescaled to it.
  double r_max = 50.0;
  PartitionScheme scheme = Api{};
  /// Aggregation scale count t; grids for scales 1..t-1 halve each dimension.
  int scales = 1;
  OutOfRangePolicy out_of_range = OutOfRangePolicy::ClampToEdge;

  double angular_bin_width() const { return 2.0 * std::numbers::pi / n_phi; }
  double height_bin_width() const { return (z_max - z_min) / n_z; }

  /// Throws config_error on any violated invariant.
  void validate() const;
};

}  // namespace nuc
