#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "barnav/geometry.hpp"
#include "barnav/sim.hpp"

namespace barnav {

struct InflatedFootprint {
  RobotFootprint base;
  double offset = 0.04;  // added on all four sides

  double half_length() const { return base.length / 2.0 + offset; }
  double half_width() const { return base.width / 2.0 + offset; }
};

struct MpcParams {
  int horizon_steps = 20;
  double step_dt = 0.01;  // 20 steps = 200 ms
  double margin = 0.0;
};

struct SafetyVerdict {
  bool safe = true;
  std::optional<int> first_unsafe_step;  // 0 for the footprint check, 1..horizon for MPC
  std::optional<Vec2> offending_point;   // robot frame

  static SafetyVerdict ok() { return {}; }
  static SafetyVerdict unsafe(int step, Vec2 point) { return {false, step, point}; }
};

enum class SafetyMode { None, FootprintInflation, Mpc };

const char* to_string(SafetyMode m);
/// Accepts "none", "fi", "mpc".
SafetyMode parse_safety_mode(std::string_view s);

struct SafetyConfig {
  SafetyMode mode = SafetyMode::FootprintInflation;
  InflatedFootprint inflated;
  MpcParams mpc;
};

/// Hits only, as robot-frame points in beam order.
std::vector<Vec2> scan_to_points(const LaserScan& scan);

/// Unsafe iff a point lies in the inflated body rectangle at the current pose.
SafetyVerdict fi_check(const std::vector<Vec2>& points, const InflatedFootprint& footprint);

/// Poses after 1..horizon_steps constant-command steps from the robot-frame origin.
std::vector<Pose2D> mpc_rollout(const Twist2D& cmd, const MpcParams& params);

/// Unsafe at the first predicted pose whose (margin-inflated) footprint holds a point.
SafetyVerdict mpc_check(const std::vector<Vec2>& points, const Twist2D& cmd,
                        const RobotFootprint& footprint, const MpcParams& params);

/// Dispatches on cfg.mode; SafetyMode::None is always safe.
SafetyVerdict forward_safe(const LaserScan& scan, const Twist2D& cmd, const SafetyConfig& cfg);

}  // namespace barnav
