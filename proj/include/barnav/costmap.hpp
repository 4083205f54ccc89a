#pragma once

#include <cstdint>
#include <string>

#include "barnav/geometry.hpp"
#include "barnav/grid.hpp"
#include "barnav/sim.hpp"

namespace barnav {

struct CostmapConfig {
  double window = 6.0;  // meters, square
  double resolution = 0.05;
  std::uint8_t occupied_threshold = 128;
  double recenter_distance = 1.5;  // window / 4
};

/// Rectangle behind the robot checked before reversing. `offset` is the
/// distance from the pose origin back to the ROI's front edge.
struct RearRoi {
  double length = 0.5;
  double width = 0.51;
  double offset = 0.254;

  /// Starts at the rear bumper and is `side_margin` wider than the body on each side.
  static RearRoi behind(const RobotFootprint& fp, double length = 0.5, double side_margin = 0.04);

  OrientedRect at(const Pose2D& pose) const;
};

/// Rolling obstacle memory. Scan endpoints are marked lethal and never
/// cleared while they stay inside the window.
class Costmap {
 public:
  explicit Costmap(const CostmapConfig& cfg = {}, const Pose2D& anchor = {});

  void integrate_scan(const LaserScan& scan);

  /// True iff no cell at or above the occupied threshold has its center in the ROI.
  /// Throws RoiOutOfWindow when the rectangle leaves the window.
  bool roi_clear(const Pose2D& pose, const RearRoi& roi) const;

  /// Marks the cell under `p` if it is inside the window.
  void mark(Vec2 p, std::uint8_t cost = kOccupiedCost);

  /// Moves the window so `center` is in its middle cell, keeping overlapping cells.
  void recenter(Vec2 center);

  const OccupancyGrid& grid() const { return grid_; }
  const Pose2D& anchor() const { return anchor_; }
  const CostmapConfig& config() const { return cfg_; }

  /// Binary PGM (P5), north up, obstacles dark.
  std::string to_pgm() const;

 private:
  Vec2 window_origin_for(Vec2 center) const;

  CostmapConfig cfg_;
  OccupancyGrid grid_;
  Pose2D anchor_;
};

}  // namespace barnav
