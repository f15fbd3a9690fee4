#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nuc {

inline constexpr double kPi = std::numbers::pi;

struct CartesianPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// r >= 0, phi in [-pi, pi).
struct CylindricalPoint {
  double r = 0.0;
  double phi = 0.0;
  double z = 0.0;
};

/// Wraps an angle into [-pi, pi); +pi folds onto the -pi edge.
inline double wrap_angle(double phi) {
  if (phi >= kPi) phi -= 2.0 * kPi;
  if (phi < -kPi) phi += 2.0 * kPi;
  return phi;
}

/// Cartesian to cylindrical. atan2(0, 0) = 0, so the degenerate origin point
/// gets phi = 0. Throws std::invalid_argument on non-finite coordinates.
inline CylindricalPoint to_cylindrical(const CartesianPoint& p) {
  if (!(std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z))) {
    throw std::invalid_argument("to_cylindrical: non-finite coordinate");
  }
  const double r = std::sqrt(p.x * p.x + p.y * p.y);
  const double phi = wrap_angle(std::atan2(p.y, p.x));
  return {r, phi, p.z};
}

}  // namespace nuc
