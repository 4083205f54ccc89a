#include "barnav/grid.hpp"

#include <algorithm>
#include <cmath>

#include "barnav/error.hpp"

namespace barnav {

namespace {
// Absorbs representation error so points on a cell face land in the upper cell.
constexpr double kFaceEps = 1e-9;
}  // namespace

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Vec2 origin,
                             std::uint8_t fill)
    : width_(width), height_(height), resolution_(resolution), origin_(origin) {
  if (width <= 0 || height <= 0) throw NavError(ErrorKind::InvalidArgument, "grid dims must be > 0");
  if (!(resolution > 0.0)) throw NavError(ErrorKind::InvalidArgument, "resolution must be > 0");
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Cell OccupancyGrid::world_to_cell(Vec2 p) const {
  return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_ + kFaceEps)),
          static_cast<int>(std::floor((p.y - origin_.y) / resolution_ + kFaceEps))};
}

std::optional<Cell> OccupancyGrid::find_cell(Vec2 p) const {
  if (!contains(p)) return std::nullopt;
  Cell c = world_to_cell(p);
  c.col = std::clamp(c.col, 0, width_ - 1);
  c.row = std::clamp(c.row, 0, height_ - 1);
  return c;
}

bool OccupancyGrid::contains(Vec2 p) const {
  return p.x >= origin_.x && p.y >= origin_.y && p.x <= origin_.x + width_m() &&
         p.y <= origin_.y + height_m();
}

std::size_t OccupancyGrid::count_occupied() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](std::uint8_t c) { return c >= kLethalThreshold; }));
}

}  // namespace barnav
