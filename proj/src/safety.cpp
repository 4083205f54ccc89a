#include "barnav/safety.hpp"

#include <cmath>
#include <string>

#include "barnav/error.hpp"

namespace barnav {

const char* to_string(SafetyMode m) {
  switch (m) {
    case SafetyMode::None: return "none";
    case SafetyMode::FootprintInflation: return "fi";
    case SafetyMode::Mpc: return "mpc";
  }
  return "?";
}

SafetyMode parse_safety_mode(std::string_view s) {
  if (s == "none") return SafetyMode::None;
  if (s == "fi") return SafetyMode::FootprintInflation;
  if (s == "mpc") return SafetyMode::Mpc;
  throw NavError(ErrorKind::InvalidArgument, "unknown safety mode '" + std::string(s) + "'");
}

std::vector<Vec2> scan_to_points(const LaserScan& scan) {
  std::vector<Vec2> pts;
  for (int i = 0; i < scan.count; ++i) {
    if (!scan.is_hit(i)) continue;
    const double r = scan.ranges[static_cast<std::size_t>(i)];
    const double a = scan.angle(i);
    pts.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return pts;
}

SafetyVerdict fi_check(const std::vector<Vec2>& points, const InflatedFootprint& fp) {
  const double cx = fp.base.center_offset;
  const double hl = fp.half_length(), hw = fp.half_width();
  for (const Vec2 p : points)
    if (std::abs(p.x - cx) <= hl && std::abs(p.y) <= hw) return SafetyVerdict::unsafe(0, p);
  return SafetyVerdict::ok();
}

std::vector<Pose2D> mpc_rollout(const Twist2D& cmd, const MpcParams& params) {
  std::vector<Pose2D> poses;
  poses.reserve(static_cast<std::size_t>(params.horizon_steps));
  Pose2D pose;
  for (int k = 0; k < params.horizon_steps; ++k) {
    pose = step(pose, cmd, params.step_dt);
    poses.push_back(pose);
  }
  return poses;
}

SafetyVerdict mpc_check(const std::vector<Vec2>& points, const Twist2D& cmd,
                        const RobotFootprint& footprint, const MpcParams& params) {
  if (points.empty()) return SafetyVerdict::ok();
  const auto poses = mpc_rollout(cmd, params);
  for (std::size_t k = 0; k < poses.size(); ++k) {
    const OrientedRect body = footprint.at(poses[k], params.margin);
    const double c = std::cos(body.heading), s = std::sin(body.heading);
    for (const Vec2 p : points) {
      const Vec2 d = p - body.center;
      if (std::abs(c * d.x + s * d.y) <= body.half_length && std::abs(-s * d.x + c * d.y) <= body.half_width)
        return SafetyVerdict::unsafe(static_cast<int>(k) + 1, p);
    }
  }
  return SafetyVerdict::ok();
}

SafetyVerdict forward_safe(const LaserScan& scan, const Twist2D& cmd, const SafetyConfig& cfg) {
  switch (cfg.mode) {
    case SafetyMode::None:
      return SafetyVerdict::ok();
    case SafetyMode::FootprintInflation:
      return fi_check(scan_to_points(scan), cfg.inflated);
    case SafetyMode::Mpc:
      return mpc_check(scan_to_points(scan), cmd, cfg.inflated.base, cfg.mpc);
  }
  return SafetyVerdict::ok();
}

}  // namespace barnav
