#pragma once

#include <vector>

#include "barnav/geometry.hpp"
#include "barnav/grid.hpp"

namespace barnav {

struct GlobalPath {
  std::vector<Vec2> waypoints;
  std::vector<double> arclength;  // cumulative, arclength[0] == 0

  bool empty() const { return waypoints.empty(); }
  double length() const { return arclength.empty() ? 0.0 : arclength.back(); }

  /// Builds a path from world points, computing Euclidean arclengths.
  static GlobalPath from_points(std::vector<Vec2> points);
};

enum class PlanStatus { Ok, NoPath, StartBlocked, GoalBlocked };

const char* to_string(PlanStatus s);

struct PlanResult {
  PlanStatus status = PlanStatus::NoPath;
  GlobalPath path;
  bool ok() const { return status == PlanStatus::Ok; }
};

/// Marks every cell whose center is within `radius` of an occupied cell center.
OccupancyGrid dilate(const OccupancyGrid& grid, double radius);

/// Soft clearance cost in the spirit of an inflation layer: entering a cell
/// whose center lies at distance d <= radius from the nearest occupied center
/// costs an extra weight * exp(-decay * max(0, d - inscribed)) per meter.
struct ClearanceCost {
  double weight = 0.0;
  double decay = 10.0;
  double radius = 0.55;
  double inscribed = 0.0;
  bool enabled() const { return weight > 0.0; }
};

/// Per-cell penalty factors for `cost`; all zeros when disabled.
std::vector<double> clearance_penalty(const OccupancyGrid& grid, const ClearanceCost& cost);

/// Dijkstra over an already dilated grid, 8-connected without corner cutting;
/// equal-cost ties go to the lower cell index. When `start_snap_radius` > 0
/// and the start cell is blocked, the search starts from the nearest free
/// cell within that radius. `penalty`, when given, scales each step entering
/// cell i by (1 + penalty[i]).
PlanResult plan_on_dilated(const OccupancyGrid& dilated, Vec2 start, Vec2 goal,
                           double start_snap_radius = 0.0, const std::vector<double>* penalty = nullptr);

PlanResult plan_global(const OccupancyGrid& grid, const Pose2D& start, Vec2 goal, double robot_radius);

struct PathProjection {
  double arclength = 0.0;
  Vec2 point;
  double distance = 0.0;
};

/// Nearest point on the polyline; the earliest segment wins ties.
PathProjection project_onto_path(const GlobalPath& path, Vec2 p);

/// Point at arclength `s`, clamped to the path ends.
Vec2 point_at_arclength(const GlobalPath& path, double s);

/// Path point `distance` meters of arclength past the pose's projection.
Vec2 sample_lookahead(const GlobalPath& path, const Pose2D& pose, double distance);

/// Signed angle from the heading to the bearing of `target`, in (-pi, pi].
/// Throws DegenerateTarget when the target coincides with the pose.
double heading_error(const Pose2D& pose, Vec2 target);

}  // namespace barnav
