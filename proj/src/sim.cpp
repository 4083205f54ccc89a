#include "barnav/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "barnav/error.hpp"

namespace barnav {

namespace {

// Returned when the ray starts inside an occupied cell; ranges stay positive.
constexpr double kMinRange = 1e-3;

double sinc(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double approach(double current, double target, double max_delta) {
  return current + std::clamp(target - current, -max_delta, max_delta);
}

}  // namespace

LaserScan LaserScan::empty(const LidarConfig& cfg, const Pose2D& origin) {
  LaserScan s;
  s.angle_min = -cfg.fov / 2.0;
  s.angle_max = cfg.fov / 2.0;
  s.count = cfg.beam_count;
  s.range_max = cfg.range_max;
  s.ranges.assign(static_cast<std::size_t>(cfg.beam_count), cfg.range_max);
  s.origin = origin;
  return s;
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw NavError(ErrorKind::InvalidArgument, "dt must be > 0");
  if (!(timeout > 0.0)) throw NavError(ErrorKind::InvalidArgument, "timeout must be > 0");
  if (!(goal_tolerance > 0.0)) throw NavError(ErrorKind::InvalidArgument, "goal_tolerance must be > 0");
  if (control_every < 1) throw NavError(ErrorKind::InvalidArgument, "control_every must be >= 1");
  if (!(v_max > 0.0) || !(w_max > 0.0)) throw NavError(ErrorKind::InvalidArgument, "velocity limits must be > 0");
  if (lidar.beam_count < 1 || !(lidar.range_max > 0.0))
    throw NavError(ErrorKind::InvalidArgument, "invalid lidar config");
}

Twist2D clamp_command(const Twist2D& cmd, double v_max, double w_max) {
  return {std::clamp(cmd.v, -v_max, v_max), std::clamp(cmd.w, -w_max, w_max)};
}

Pose2D step(const Pose2D& pose, const Twist2D& cmd, double dt) {
  // Chord form of the arc: stable as w -> 0 and exact for the straight case.
  const double half = 0.5 * cmd.w * dt;
  const double chord = cmd.v * dt * sinc(half);
  const double mid = pose.theta + half;
  return {pose.x + chord * std::cos(mid), pose.y + chord * std::sin(mid),
          normalize_angle(pose.theta + cmd.w * dt)};
}

Twist2D apply_accel_limits(const Twist2D& current, const Twist2D& target,
                           const AccelLimits& limits, double dt) {
  Twist2D out = target;
  if (limits.linear > 0.0) out.v = approach(current.v, target.v, limits.linear * dt);
  if (limits.angular > 0.0) out.w = approach(current.w, target.w, limits.angular * dt);
  return out;
}

double cast_ray(const OccupancyGrid& grid, Vec2 from, double angle, double range_max) {
  const double res = grid.resolution();
  const Vec2 org = grid.origin();
  const double dx = std::cos(angle), dy = std::sin(angle);
  Cell cell = grid.world_to_cell(from);
  constexpr double inf = std::numeric_limits<double>::infinity();

  const int step_x = dx > 0.0 ? 1 : -1;
  const int step_y = dy > 0.0 ? 1 : -1;
  double t_max_x = inf, t_max_y = inf, t_delta_x = inf, t_delta_y = inf;
  if (dx != 0.0) {
    const double face = org.x + (cell.col + (step_x > 0 ? 1 : 0)) * res;
    t_max_x = (face - from.x) / dx;
    t_delta_x = res / std::abs(dx);
  }
  if (dy != 0.0) {
    const double face = org.y + (cell.row + (step_y > 0 ? 1 : 0)) * res;
    t_max_y = (face - from.y) / dy;
    t_delta_y = res / std::abs(dy);
  }

  double t = 0.0;
  while (t <= range_max) {
    if (!grid.in_bounds(cell)) return range_max;
    if (grid.occupied(cell)) return std::clamp(t, kMinRange, range_max);
    if (t_max_x < t_max_y) {
      t = t_max_x;
      t_max_x += t_delta_x;
      cell.col += step_x;
    } else {
      t = t_max_y;
      t_max_y += t_delta_y;
      cell.row += step_y;
    }
  }
  return range_max;
}

LaserScan scan(const OccupancyGrid& grid, const Pose2D& pose, const LidarConfig& cfg) {
  if (!grid.contains(pose.position()))
    throw NavError(ErrorKind::PoseOutOfBounds, "scan origin outside grid");
  LaserScan s = LaserScan::empty(cfg, pose);
  for (int i = 0; i < s.count; ++i)
    s.ranges[static_cast<std::size_t>(i)] =
        cast_ray(grid, pose.position(), pose.theta + s.angle(i), cfg.range_max);
  return s;
}

bool check_collision(const OccupancyGrid& grid, const Pose2D& pose, const RobotFootprint& footprint) {
  const OrientedRect rect = footprint.at(pose);
  const double r = rect.circumradius();
  const Cell lo = grid.world_to_cell(rect.center - Vec2{r, r});
  const Cell hi = grid.world_to_cell(rect.center + Vec2{r, r});
  for (int row = std::max(lo.row, 0); row <= std::min(hi.row, grid.height() - 1); ++row)
    for (int col = std::max(lo.col, 0); col <= std::min(hi.col, grid.width() - 1); ++col) {
      const Cell c{col, row};
      if (grid.occupied(c) && rect.contains(grid.cell_center(c))) return true;
    }
  return false;
}

}  // namespace barnav
