#include "barnav/costmap.hpp"

#include <algorithm>
#include <cmath>

#include "barnav/error.hpp"

namespace barnav {

RearRoi RearRoi::behind(const RobotFootprint& fp, double length, double side_margin) {
  return {length, fp.width + 2.0 * side_margin, fp.length / 2.0 - fp.center_offset};
}

OrientedRect RearRoi::at(const Pose2D& pose) const {
  return {pose.to_world({-(offset + length / 2.0), 0.0}), pose.theta, length / 2.0, width / 2.0};
}

Costmap::Costmap(const CostmapConfig& cfg, const Pose2D& anchor) : cfg_(cfg), anchor_(anchor) {
  if (!(cfg.window > 0.0) || !(cfg.resolution > 0.0))
    throw NavError(ErrorKind::InvalidArgument, "costmap window and resolution must be > 0");
  const int n = static_cast<int>(std::lround(cfg.window / cfg.resolution));
  grid_ = OccupancyGrid(n, n, cfg.resolution, window_origin_for(anchor.position()));
}

Vec2 Costmap::window_origin_for(Vec2 center) const {
  // Origins stay on multiples of the resolution so recentering shifts by whole cells.
  const double res = cfg_.resolution;
  const double half = (grid_.width() > 0 ? grid_.width() : std::lround(cfg_.window / res)) / 2;
  return {(std::round(center.x / res) - half) * res, (std::round(center.y / res) - half) * res};
}

void Costmap::recenter(Vec2 center) {
  const Vec2 new_origin = window_origin_for(center);
  const double res = cfg_.resolution;
  const int shift_c = static_cast<int>(std::lround((grid_.origin().x - new_origin.x) / res));
  const int shift_r = static_cast<int>(std::lround((grid_.origin().y - new_origin.y) / res));
  OccupancyGrid next(grid_.width(), grid_.height(), res, new_origin);
  for (int row = 0; row < grid_.height(); ++row)
    for (int col = 0; col < grid_.width(); ++col) {
      const Cell dst{col + shift_c, row + shift_r};
      if (next.in_bounds(dst)) next.set_cost(dst, grid_.cost({col, row}));
    }
  grid_ = std::move(next);
  anchor_.x = center.x;
  anchor_.y = center.y;
}

void Costmap::mark(Vec2 p, std::uint8_t cost) {
  if (const auto c = grid_.find_cell(p)) grid_.set_cost(*c, std::max(grid_.cost(*c), cost));
}

void Costmap::integrate_scan(const LaserScan& scan) {
  if (distance(scan.origin.position(), anchor_.position()) > cfg_.recenter_distance)
    recenter(scan.origin.position());
  anchor_.theta = scan.origin.theta;
  for (int i = 0; i < scan.count; ++i) {
    if (!scan.is_hit(i)) continue;
    const double r = scan.ranges[static_cast<std::size_t>(i)];
    const double a = scan.angle(i);
    mark(scan.origin.to_world({r * std::cos(a), r * std::sin(a)}));
  }
}

bool Costmap::roi_clear(const Pose2D& pose, const RearRoi& roi) const {
  const OrientedRect rect = roi.at(pose);
  const double c = std::cos(rect.heading), s = std::sin(rect.heading);
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const double sl : {-1.0, 1.0})
    for (const double sw : {-1.0, 1.0}) {
      const Vec2 corner{rect.center.x + sl * rect.half_length * c - sw * rect.half_width * s,
                        rect.center.y + sl * rect.half_length * s + sw * rect.half_width * c};
      if (!grid_.contains(corner)) throw NavError(ErrorKind::RoiOutOfWindow, "rear ROI exits costmap window");
      lo = {std::min(lo.x, corner.x), std::min(lo.y, corner.y)};
      hi = {std::max(hi.x, corner.x), std::max(hi.y, corner.y)};
    }
  const Cell a = grid_.world_to_cell(lo), b = grid_.world_to_cell(hi);
  for (int row = std::max(a.row, 0); row <= std::min(b.row, grid_.height() - 1); ++row)
    for (int col = std::max(a.col, 0); col <= std::min(b.col, grid_.width() - 1); ++col) {
      const Cell cell{col, row};
      if (grid_.cost(cell) >= cfg_.occupied_threshold && rect.contains(grid_.cell_center(cell)))
        return false;
    }
  return true;
}

std::string Costmap::to_pgm() const {
  std::string out = "P5\n" + std::to_string(grid_.width()) + " " + std::to_string(grid_.height()) + "\n255\n";
  for (int row = grid_.height() - 1; row >= 0; --row)
    for (int col = 0; col < grid_.width(); ++col)
      out += static_cast<char>(255 - grid_.cost({col, row}));
  return out;
}

}  // namespace barnav
