#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "barnav/geometry.hpp"
#include "barnav/grid.hpp"

namespace barnav {

struct LidarConfig {
  int beam_count = 720;
  double range_max = 10.0;
  double fov = 1.5 * kPi;  // 270 deg, centered on the heading
};

/// One sweep. Beam i sits at angle_min + i * increment() in the sensor
/// frame, so the first and last beams lie exactly on the arc limits.
struct LaserScan {
  double angle_min = 0.0;
  double angle_max = 0.0;
  int count = 0;
  std::vector<double> ranges;
  double range_max = 0.0;
  Pose2D origin;

  double increment() const { return count > 1 ? (angle_max - angle_min) / (count - 1) : 0.0; }
  double angle(int i) const {
    return count > 1 ? angle_min + i * increment() : 0.5 * (angle_min + angle_max);
  }
  bool is_hit(int i) const { return ranges[static_cast<std::size_t>(i)] < range_max; }

  /// Scan with every beam at range_max.
  static LaserScan empty(const LidarConfig& cfg, const Pose2D& origin = {});
};

struct AccelLimits {
  double linear = 0.0;   // m/s^2
  double angular = 0.0;  // rad/s^2
};

struct SimConfig {
  double dt = 0.01;
  int control_every = 5;  // physics steps per controller tick (20 Hz)
  double v_max = 0.7;
  double w_max = 1.5;
  std::optional<AccelLimits> accel_limits;
  LidarConfig lidar;
  RobotFootprint footprint;
  double goal_tolerance = 0.5;
  double timeout = 100.0;
  std::uint64_t seed = 0;
  double start_heading_jitter = 0.0;  // radians, uniform +/- from seed

  void validate() const;
};

Twist2D clamp_command(const Twist2D& cmd, double v_max, double w_max);

/// Constant-twist unicycle update along the exact arc.
Pose2D step(const Pose2D& pose, const Twist2D& cmd, double dt);

/// Moves `current` toward `target` within the acceleration limits.
Twist2D apply_accel_limits(const Twist2D& current, const Twist2D& target,
                           const AccelLimits& limits, double dt);

/// Ray-casts every beam through the grid by incremental cell stepping.
/// Throws PoseOutOfBounds if the pose lies outside the grid.
LaserScan scan(const OccupancyGrid& grid, const Pose2D& pose, const LidarConfig& cfg);

/// Distance along a single ray to the first occupied cell face, capped at range_max.
double cast_ray(const OccupancyGrid& grid, Vec2 from, double angle, double range_max);

/// Ground truth: true iff an occupied cell center lies in the (uninflated) footprint.
bool check_collision(const OccupancyGrid& grid, const Pose2D& pose, const RobotFootprint& footprint);

}  // namespace barnav
