#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "nuc/error.hpp"

namespace nuc {

/// Constant radial interval r_max / n_r.
struct Uniform {};

/// Arithmetic progression: interval i is a0 + i*d.
struct Api {
  double a0 = 0.05;
  double d = 0.0062;
};

/// Geometric progression: interval i is a0 * ratio^i.
struct Gpi {
  double a0 = 0.05;
  double ratio = 1.0541;
};

/// Fixed interval per radial region. Region r spans
/// [region_bounds[r], region_bounds[r+1]) and is cut into region_counts[r]
/// equal bins; the counts must sum to n_r and bounds must start at 0.
struct Piecewise {
  std::vector<double> region_bounds{0.0, 15.0, 30.0, 50.0};
  std::vector<int> region_counts{80, 30, 10};
};

/// Arithmetic progression whose difference itself grows: the step between
/// consecutive intervals is d + i*d_prime, giving
/// interval i = a0 + i*d + d_prime*i*(i-1)/2.
struct IncreasingD {
  double a0 = 0.05;
  double d = 0.0052;
  double d_prime = 0.000025;
};

using PartitionScheme = std::variant<Uniform, Api, Gpi, Piecewise, IncreasingD>;

/// Lowercase tag used in configs and reports: uniform, api, gpi, piecewise,
/// increasing-d.
std::string scheme_name(const PartitionScheme& scheme);

/// Throws config_error when a parameter violates its constraint.
void validate_scheme(const PartitionScheme& scheme, int n_r);

/// Length of every radial bin, in order. r_max is consumed by Uniform only;
/// the parametric schemes end wherever their parameters imply.
Eigen::ArrayXd radial_intervals(const PartitionScheme& scheme, int n_r, double r_max);

}  // namespace nuc
