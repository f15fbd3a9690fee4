#pragma once

#include <optional>

#include "nuc/config.hpp"

namespace nuc {

/// Radial bin edges: n_r + 1 strictly increasing values starting at 0.
/// Immutable after construction and safe to share across threads.
class RadialBoundaries {
 public:
  explicit RadialBoundaries(Eigen::ArrayXd edges);

  int bin_count() const { return static_cast<int>(edges_.size()) - 1; }
  double edge(int i) const { return edges_[i]; }
  double last_edge() const { return edges_[edges_.size() - 1]; }
  double interval(int i) const { return edges_[i + 1] - edges_[i]; }
  double midpoint(int i) const { return 0.5 * (edges_[i] + edges_[i + 1]); }
  const Eigen::ArrayXd& edges() const { return edges_; }

 private:
  Eigen::ArrayXd edges_;
};

/// Accumulates the scheme's intervals from 0. Uniform edges are computed as
/// i*r_max/n_r so the last edge lands on r_max exactly.
RadialBoundaries build_boundaries(const GridConfig& config);

/// Bin index i with edge(i) <= r < edge(i+1). Radii at or past the last edge
/// clamp to the last bin or return nullopt, per policy. r must be >= 0.
std::optional<int> radial_index(const RadialBoundaries& b, double r,
                                OutOfRangePolicy policy);

/// O(1) radial lookup for the arithmetic-progression scheme: inverts the
/// quadratic cumulative sum, then nudges the candidate against the stored
/// edges so results agree with radial_index on every input.
class ApiRadialLookup {
 public:
  ApiRadialLookup(const Api& api, const RadialBoundaries& b);

  std::optional<int> operator()(double r, OutOfRangePolicy policy) const;

 private:
  const RadialBoundaries* boundaries_;
  double half_d_;  // d / 2
  double lead_;    // a0 - d / 2; edge(i) = half_d*i^2 + lead*i
};

/// Exact wedge volume (h*b/2) * (edge(i+1)^2 - edge(i)^2) where b and h are
/// the angular and height bin widths. j and k are range-checked only: every
/// angular/height cell of ring i is congruent.
double cell_volume(const RadialBoundaries& b, int i, int j, int k,
                   const GridConfig& config);

/// Radial span of bins {i-1, i, i+1}, truncated at the grid edges. This is
/// what a 3-wide convolution sees along the radius.
double receptive_length(const RadialBoundaries& b, int i);

/// Interval i of the scale-s grid for the arithmetic-progression scheme;
/// s = 0 reproduces the base progression. Each coarse interval equals the sum
/// of its two children one scale below.
double multiscale_interval(const Api& api, int s, int i);

/// Dispatching overload; throws config_error for any other scheme.
double multiscale_interval(const PartitionScheme& scheme, int s, int i);

/// Every 2^s-th edge of the base grid, so coarse bins nest exactly and a
/// point's coarse radial index is its base index shifted right by s.
RadialBoundaries multiscale_boundaries(const RadialBoundaries& base, int s);

}  // namespace nuc
