#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "barnav/geometry.hpp"

namespace barnav {

inline constexpr std::uint8_t kFreeCost = 0;
inline constexpr std::uint8_t kOccupiedCost = 255;
inline constexpr std::uint8_t kLethalThreshold = 128;

/// Column/row address of a grid cell. Columns run along +x, rows along +y.
struct Cell {
  int col = 0;
  int row = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Row-major cost grid. `origin` is the world position of the lower-left
/// corner of cell (0, 0). World grids only hold kFreeCost / kOccupiedCost.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution, Vec2 origin = {},
                std::uint8_t fill = kFreeCost);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }
  void set_origin(Vec2 origin) { origin_ = origin; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(Cell c) const {
    return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
  }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  std::uint8_t cost(Cell c) const { return cells_[index(c)]; }
  void set_cost(Cell c, std::uint8_t cost) { cells_[index(c)] = cost; }
  bool occupied(Cell c) const { return cells_[index(c)] >= kLethalThreshold; }
  void set_occupied(Cell c, bool occ) { set_cost(c, occ ? kOccupiedCost : kFreeCost); }

  std::span<const std::uint8_t> data() const { return cells_; }
  std::span<std::uint8_t> data() { return cells_; }

  Vec2 cell_center(Cell c) const {
    return {origin_.x + (c.col + 0.5) * resolution_, origin_.y + (c.row + 0.5) * resolution_};
  }
  /// Cell containing `p`, which may lie outside the grid.
  Cell world_to_cell(Vec2 p) const;
  std::optional<Cell> find_cell(Vec2 p) const;
  bool contains(Vec2 p) const;

  double width_m() const { return width_ * resolution_; }
  double height_m() const { return height_ * resolution_; }

  std::size_t count_occupied() const;

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  Vec2 origin_;
  std::vector<std::uint8_t> cells_;
};

}  // namespace barnav
