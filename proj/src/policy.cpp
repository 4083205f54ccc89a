#include "barnav/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "barnav/error.hpp"

namespace barnav {

double front_cone_min_range(const LaserScan& scan, double half_angle) {
  double d = scan.range_max;
  for (int i = 0; i < scan.count; ++i)
    if (std::abs(scan.angle(i)) <= half_angle) d = std::min(d, scan.ranges[static_cast<std::size_t>(i)]);
  return d;
}

Twist2D PurePursuitPolicy::command(const LaserScan& scan, Vec2 rel, double v_max) const {
  const double d2 = rel.dot(rel);
  if (std::sqrt(d2) < 1e-6) throw NavError(ErrorKind::DegenerateLookahead, "lookahead at robot origin");
  const double curvature = 2.0 * rel.y / d2;
  const double clearance = front_cone_min_range(scan, params_.cone_half_angle);
  const double v = v_max * std::min(1.0, clearance / params_.slow_distance);
  return {std::clamp(v, -v_max, v_max), std::clamp(curvature * v, -params_.w_max, params_.w_max)};
}

std::unique_ptr<DrivePolicy> make_policy(std::string_view name, const PurePursuitParams& params) {
  if (name == "pursuit") return std::make_unique<PurePursuitPolicy>(params);
  throw NavError(ErrorKind::InvalidArgument, "unknown policy '" + std::string(name) + "'");
}

}  // namespace barnav
