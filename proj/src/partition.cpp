#include "nuc/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace nuc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void fail(const std::string& msg) { throw config_error(msg); }

}  // namespace

std::string scheme_name(const PartitionScheme& scheme) {
  return std::visit(overloaded{[](const Uniform&) { return std::string("uniform"); },
                               [](const Api&) { return std::string("api"); },
                               [](const Gpi&) { return std::string("gpi"); },
                               [](const Piecewise&) { return std::string("piecewise"); },
                               [](const IncreasingD&) { return std::string("increasing-d"); }},
                    scheme);
}

void validate_scheme(const PartitionScheme& scheme, int n_r) {
  if (n_r < 1) fail("n_r must be >= 1");
  std::visit(
      overloaded{
          [](const Uniform&) {},
          [](const Api& s) {
            if (!(s.a0 > 0.0) || !std::isfinite(s.a0)) fail("api: a0 must be > 0");
            if (!(s.d >= 0.0) || !std::isfinite(s.d)) fail("api: d must be >= 0");
          },
          [](const Gpi& s) {
            if (!(s.a0 > 0.0) || !std::isfinite(s.a0)) fail("gpi: a0 must be > 0");
            if (!(s.ratio > 1.0) || !std::isfinite(s.ratio)) fail("gpi: ratio must be > 1");
          },
          [n_r](const Piecewise& s) {
            if (s.region_bounds.size() < 2) fail("piecewise: need at least 2 region bounds");
            if (s.region_bounds.front() != 0.0) fail("piecewise: region bounds must start at 0");
            for (std::size_t r = 0; r + 1 < s.region_bounds.size(); ++r) {
              if (!(s.region_bounds[r] < s.region_bounds[r + 1])) {
                fail("piecewise: region bounds must be strictly increasing");
              }
            }
            if (s.region_counts.size() != s.region_bounds.size() - 1) {
              fail("piecewise: need one count per region");
            }
            int total = 0;
            for (int c : s.region_counts) {
              if (c <= 0) fail("piecewise: region counts must be positive");
              total += c;
            }
            if (total != n_r) {
              std::ostringstream os;
              os << "piecewise: region counts sum to " << total << ", expected n_r = " << n_r;
              fail(os.str());
            }
          },
          [](const IncreasingD& s) {
            if (!(s.a0 > 0.0) || !std::isfinite(s.a0)) fail("increasing-d: a0 must be > 0");
            if (!(s.d >= 0.0) || !std::isfinite(s.d)) fail("increasing-d: d must be >= 0");
            if (!(s.d_prime >= 0.0) || !std::isfinite(s.d_prime)) {
              fail("increasing-d: d_prime must be >= 0");
            }
          }},
      scheme);
}

Eigen::ArrayXd radial_intervals(const PartitionScheme& scheme, int n_r, double r_max) {
  validate_scheme(scheme, n_r);
  Eigen::ArrayXd out(n_r);
  std::visit(overloaded{[&](const Uniform&) {
                          if (!(r_max > 0.0)) fail("uniform: r_max must be > 0");
                          out.setConstant(r_max / n_r);
                        },
                        [&](const Api& s) {
                          for (int i = 0; i < n_r; ++i) out[i] = s.a0 + i * s.d;
                        },
                        [&](const Gpi& s) {
                          for (int i = 0; i < n_r; ++i) out[i] = s.a0 * std::pow(s.ratio, i);
                        },
                        [&](const Piecewise& s) {
                          int i = 0;
                          for (std::size_t r = 0; r < s.region_counts.size(); ++r) {
                            const double width =
                                (s.region_bounds[r + 1] - s.region_bounds[r]) / s.region_counts[r];
                            for (int c = 0; c < s.region_counts[r]; ++c) out[i++] = width;
                          }
                        },
                        [&](const IncreasingD& s) {
                          for (int i = 0; i < n_r; ++i) {
                            out[i] = s.a0 + i * s.d + s.d_prime * (0.5 * i * (i - 1));
                          }
                        }},
             scheme);
  return out;
}

void GridConfig::validate() const {
  if (n_r < 1 || n_phi < 1 || n_z < 1) fail("grid resolution must be >= 1 in every dimension");
  if (!(z_min < z_max)) fail("z_min must be < z_max");
  if (!std::isfinite(z_min) || !std::isfinite(z_max)) fail("z bounds must be finite");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) fail("r_max must be > 0");
  if (scales < 1) fail("scales must be >= 1");
  if (scales > 1) {
    const int stride = 1 << (scales - 1);
    if (n_r % stride != 0 || n_phi % stride != 0 || n_z % stride != 0) {
      std::ostringstream os;
      os << "scales=" << scales << " needs n_r, n_phi, n_z divisible by " << stride;
      fail(os.str());
    }
  }
  validate_scheme(scheme, n_r);
}

RadialBoundaries::RadialBoundaries(Eigen::ArrayXd edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) fail("boundaries: need at least one bin");
  if (edges_[0] != 0.0) fail("boundaries: first edge must be 0");
  for (Eigen::Index i = 0; i + 1 < edges_.size(); ++i) {
    if (!std::isfinite(edges_[i + 1]) || !(edges_[i] < edges_[i + 1])) {
      fail("boundaries: edges must be finite and strictly increasing");
    }
  }
}

RadialBoundaries build_boundaries(const GridConfig& config) {
  config.validate();
  const int n = config.n_r;
  Eigen::ArrayXd edges(n + 1);
  if (std::holds_alternative<Uniform>(config.scheme)) {
    for (int i = 0; i <= n; ++i) edges[i] = (config.r_max * i) / n;
  } else {
    const Eigen::ArrayXd intervals = radial_intervals(config.scheme, n, config.r_max);
    edges[0] = 0.0;
    for (int i = 0; i < n; ++i) edges[i + 1] = edges[i] + intervals[i];
  }
  return RadialBoundaries(std::move(edges));
}

std::optional<int> radial_index(const RadialBoundaries& b, double r, OutOfRangePolicy policy) {
  if (!(r >= 0.0)) throw std::invalid_argument("radial_index: radius must be >= 0");
  if (r >= b.last_edge()) {
    if (policy == OutOfRangePolicy::Drop) return std::nullopt;
    return b.bin_count() - 1;
  }
  const double* begin = b.edges().data();
  const double* end = begin + b.edges().size();
  return static_cast<int>(std::upper_bound(begin, end, r) - begin) - 1;
}

ApiRadialLookup::ApiRadialLookup(const Api& api, const RadialBoundaries& b)
    : boundaries_(&b), half_d_(0.5 * api.d), lead_(api.a0 - 0.5 * api.d) {
  validate_scheme(api, b.bin_count());
}

std::optional<int> ApiRadialLookup::operator()(double r, OutOfRangePolicy policy) const {
  const RadialBoundaries& b = *boundaries_;
  if (!(r >= 0.0)) throw std::invalid_argument("radial_index: radius must be >= 0");
  if (r >= b.last_edge()) {
    if (policy == OutOfRangePolicy::Drop) return std::nullopt;
    return b.bin_count() - 1;
  }
  // Solve half_d*x^2 + lead*x = r for the continuous bin coordinate.
  double x;
  if (half_d_ > 0.0) {
    x = (std::sqrt(lead_ * lead_ + 4.0 * half_d_ * r) - lead_) / (2.0 * half_d_);
  } else {
    x = r / lead_;  // d == 0 degenerates to constant spacing a0
  }
  int i = std::clamp(static_cast<int>(x), 0, b.bin_count() - 1);
  while (i > 0 && r < b.edge(i)) --i;
  while (i + 1 < b.bin_count() && r >= b.edge(i + 1)) ++i;
  return i;
}

double cell_volume(const RadialBoundaries& b, int i, int j, int k, const GridConfig& config) {
  if (i < 0 || i >= b.bin_count() || j < 0 || j >= config.n_phi || k < 0 || k >= config.n_z) {
    throw std::out_of_range("cell_volume: voxel index outside grid");
  }
  const double lo = b.edge(i);
  const double hi = b.edge(i + 1);
  return 0.5 * config.height_bin_width() * config.angular_bin_width() * (hi * hi - lo * lo);
}

double receptive_length(const RadialBoundaries& b, int i) {
  if (i < 0 || i >= b.bin_count()) throw std::out_of_range("receptive_length: bin out of range");
  const int lo = std::max(i - 1, 0);
  const int hi = std::min(i + 2, b.bin_count());
  return b.edge(hi) - b.edge(lo);
}

double multiscale_interval(const Api& api, int s, int i) {
  if (s < 0) throw std::invalid_argument("multiscale_interval: scale must be >= 0");
  if (i < 0) throw std::invalid_argument("multiscale_interval: index must be >= 0");
  const double coef =
      std::ldexp(static_cast<double>(i), 2 * s) + std::ldexp(1.0, 2 * s - 1) - std::ldexp(1.0, s - 1);
  return std::ldexp(api.a0, s) + coef * api.d;
}

double multiscale_interval(const PartitionScheme& scheme, int s, int i) {
  if (const auto* api = std::get_if<Api>(&scheme)) return multiscale_interval(*api, s, i);
  throw config_error("multi-scale intervals are defined for the api scheme only, got " +
                     scheme_name(scheme));
}

RadialBoundaries multiscale_boundaries(const RadialBoundaries& base, int s) {
  if (s < 0) throw std::invalid_argument("multiscale_boundaries: scale must be >= 0");
  const int stride = 1 << s;
  if (base.bin_count() % stride != 0) {
    fail("multiscale_boundaries: bin count not divisible by 2^s");
  }
  const int n = base.bin_count() / stride;
  Eigen::ArrayXd edges(n + 1);
  for (int i = 0; i <= n; ++i) edges[i] = base.edge(i * stride);
  return RadialBoundaries(std::move(edges));
}

}  // namespace nuc
