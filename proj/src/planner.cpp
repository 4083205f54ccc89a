#include "barnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "barnav/error.hpp"

namespace barnav {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::optional<Cell> nearest_free(const OccupancyGrid& g, Cell from, double radius) {
  const int reach = static_cast<int>(std::ceil(radius / g.resolution()));
  std::optional<Cell> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int dr = -reach; dr <= reach; ++dr)
    for (int dc = -reach; dc <= reach; ++dc) {
      const Cell c{from.col + dc, from.row + dr};
      if (!g.in_bounds(c) || g.occupied(c)) continue;
      const double d = std::hypot(dc, dr) * g.resolution();
      if (d > radius) continue;
      if (d < best_d || (d == best_d && g.index(c) < g.index(*best))) {
        best = c;
        best_d = d;
      }
    }
  return best;
}

}  // namespace

GlobalPath GlobalPath::from_points(std::vector<Vec2> points) {
  GlobalPath p;
  p.waypoints = std::move(points);
  p.arclength.reserve(p.waypoints.size());
  double s = 0.0;
  for (std::size_t i = 0; i < p.waypoints.size(); ++i) {
    if (i > 0) s += distance(p.waypoints[i], p.waypoints[i - 1]);
    p.arclength.push_back(s);
  }
  return p;
}

const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::Ok: return "Ok";
    case PlanStatus::NoPath: return "NoPath";
    case PlanStatus::StartBlocked: return "StartBlocked";
    case PlanStatus::GoalBlocked: return "GoalBlocked";
  }
  return "?";
}

OccupancyGrid dilate(const OccupancyGrid& grid, double radius) {
  std::vector<std::pair<int, int>> kernel;
  const int reach = static_cast<int>(std::floor(radius / grid.resolution()));
  for (int dr = -reach; dr <= reach; ++dr)
    for (int dc = -reach; dc <= reach; ++dc)
      if (std::hypot(dc, dr) * grid.resolution() <= radius) kernel.emplace_back(dc, dr);

  OccupancyGrid out = grid;
  for (int row = 0; row < grid.height(); ++row)
    for (int col = 0; col < grid.width(); ++col) {
      if (!grid.occupied({col, row})) continue;
      for (const auto& [dc, dr] : kernel) {
        const Cell c{col + dc, row + dr};
        if (out.in_bounds(c)) out.set_occupied(c, true);
      }
    }
  return out;
}

std::vector<double> clearance_penalty(const OccupancyGrid& grid, const ClearanceCost& cc) {
  std::vector<double> pen(grid.size(), 0.0);
  if (!cc.enabled()) return pen;
  const int reach = static_cast<int>(std::ceil(cc.radius / grid.resolution()));
  for (int row = 0; row < grid.height(); ++row)
    for (int col = 0; col < grid.width(); ++col) {
      if (grid.occupied({col, row})) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int dr = -reach; dr <= reach; ++dr)
        for (int dc = -reach; dc <= reach; ++dc) {
          const Cell c{col + dc, row + dr};
          if (!grid.in_bounds(c) || grid.occupied(c)) best = std::min(best, std::hypot(dc, dr) * grid.resolution());
        }
      if (best <= cc.radius)
        pen[grid.index({col, row})] = cc.weight * std::exp(-cc.decay * std::max(0.0, best - cc.inscribed));
    }
  return pen;
}

PlanResult plan_on_dilated(const OccupancyGrid& g, Vec2 start, Vec2 goal, double start_snap_radius,
                           const std::vector<double>* penalty) {
  if (penalty && penalty->size() != g.size()) throw NavError(ErrorKind::InvalidArgument, "penalty size mismatch");
  PlanResult result;
  const auto goal_cell = g.find_cell(goal);
  if (!goal_cell || g.occupied(*goal_cell)) {
    result.status = PlanStatus::GoalBlocked;
    return result;
  }
  auto start_cell = g.find_cell(start);
  if (start_cell && g.occupied(*start_cell)) {
    start_cell = start_snap_radius > 0.0 ? nearest_free(g, *start_cell, start_snap_radius) : std::nullopt;
  }
  if (!start_cell) {
    result.status = PlanStatus::StartBlocked;
    return result;
  }

  // Costs in cell units; step counts are kept so lengths are exact sums.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(g.size(), inf);
  std::vector<std::size_t> parent(g.size(), kNone);
  std::vector<bool> done(g.size(), false);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const std::size_t s = g.index(*start_cell), t = g.index(*goal_cell);
  cost[s] = 0.0;
  open.emplace(0.0, s);
  while (!open.empty()) {
    const auto [d, idx] = open.top();
    open.pop();
    if (done[idx]) continue;
    done[idx] = true;
    if (idx == t) break;
    const Cell c = g.cell_at(idx);
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const Cell nb{c.col + dc, c.row + dr};
        if (!g.in_bounds(nb) || g.occupied(nb)) continue;
        const bool diagonal = dr != 0 && dc != 0;
        if (diagonal && (g.occupied({c.col + dc, c.row}) || g.occupied({c.col, c.row + dr}))) continue;
        const std::size_t ni = g.index(nb);
        const double step = diagonal ? kSqrt2 : 1.0;
        const double cand = d + (penalty ? step * (1.0 + (*penalty)[ni]) : step);
        if (cand < cost[ni]) {
          cost[ni] = cand;
          parent[ni] = idx;
          open.emplace(cand, ni);
        }
      }
  }
  if (!done[t]) {
    result.status = PlanStatus::NoPath;
    return result;
  }

  std::vector<std::size_t> chain;
  for (std::size_t i = t; i != kNone; i = parent[i]) chain.push_back(i);
  std::reverse(chain.begin(), chain.end());
  long straight = 0, diag = 0;
  Cell prev = g.cell_at(chain.front());
  for (const std::size_t i : chain) {
    const Cell c = g.cell_at(i);
    if (c != prev) ((c.col != prev.col && c.row != prev.row) ? diag : straight) += 1;
    result.path.waypoints.push_back(g.cell_center(c));
    result.path.arclength.push_back((static_cast<double>(straight) + static_cast<double>(diag) * kSqrt2) *
                                    g.resolution());
    prev = c;
  }
  result.status = PlanStatus::Ok;
  return result;
}

PlanResult plan_global(const OccupancyGrid& grid, const Pose2D& start, Vec2 goal, double robot_radius) {
  return plan_on_dilated(dilate(grid, robot_radius), start.position(), goal);
}

PathProjection project_onto_path(const GlobalPath& path, Vec2 p) {
  if (path.empty()) throw NavError(ErrorKind::InvalidArgument, "empty path");
  PathProjection best{0.0, path.waypoints.front(), distance(p, path.waypoints.front())};
  for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
    const Vec2 a = path.waypoints[i - 1], b = path.waypoints[i];
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    const double u = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const Vec2 q = a + u * ab;
    const double d = distance(p, q);
    if (d < best.distance) {
      const double seg = path.arclength[i] - path.arclength[i - 1];
      best = {path.arclength[i - 1] + u * seg, q, d};
    }
  }
  return best;
}

Vec2 point_at_arclength(const GlobalPath& path, double s) {
  if (path.empty()) throw NavError(ErrorKind::InvalidArgument, "empty path");
  if (s <= 0.0) return path.waypoints.front();
  if (s >= path.length()) return path.waypoints.back();
  const auto it = std::upper_bound(path.arclength.begin(), path.arclength.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - path.arclength.begin());  // arclength[i-1] <= s < arclength[i]
  const double seg = path.arclength[i] - path.arclength[i - 1];
  const double u = seg > 0.0 ? (s - path.arclength[i - 1]) / seg : 0.0;
  return path.waypoints[i - 1] + u * (path.waypoints[i] - path.waypoints[i - 1]);
}

Vec2 sample_lookahead(const GlobalPath& path, const Pose2D& pose, double dist) {
  return point_at_arclength(path, project_onto_path(path, pose.position()).arclength + dist);
}

double heading_error(const Pose2D& pose, Vec2 target) {
  const Vec2 d = target - pose.position();
  if (d.norm() < 1e-6) throw NavError(ErrorKind::DegenerateTarget, "target coincides with pose");
  return normalize_angle(std::atan2(d.y, d.x) - pose.theta);
}

}  // namespace barnav
