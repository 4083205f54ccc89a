#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "barnav/geometry.hpp"
#include "barnav/grid.hpp"

namespace barnav {

/// Maximal speed used to turn an A* path length into an optimal traversal time.
inline constexpr double kOptimalSpeed = 2.0;

struct GenParams {
  double initial_fill = 0.15;
  int smoothing_iterations = 1;
  int fill_threshold = 5;
  int clear_threshold = 1;
  int width = 30;   // cells
  int height = 30;  // cells
  double resolution = 0.15;
  std::uint64_t seed = 0;
  // Radius around start and goal forced free; must cover the footprint half-diagonal.
  double clearance_radius = 0.45;
  int max_attempts = 100;

  void validate() const;
  friend bool operator==(const GenParams&, const GenParams&) = default;
};

struct WorldSpec {
  OccupancyGrid grid;
  Pose2D start;
  Vec2 goal;
  double path_length = 0.0;   // meters, A* on the cell grid
  double optimal_time = 0.0;  // seconds, path_length / kOptimalSpeed
  GenParams params;
};

/// Bernoulli(initial_fill) interior seeding with an occupied border, then
/// synchronous Moore-neighborhood smoothing.
OccupancyGrid cellular_automaton(const GenParams& params, std::mt19937_64& rng);

/// One synchronous smoothing pass over the interior cells.
OccupancyGrid smooth_once(const OccupancyGrid& grid, int fill_threshold, int clear_threshold);

/// 4-connected reachability through free cells. Throws CellOccupied if an
/// endpoint is occupied.
bool flood_fill_connected(const OccupancyGrid& grid, Cell start, Cell goal);

/// Minimal-cost 8-connected path (diagonals may not cut occupied corners),
/// octile heuristic. nullopt when unreachable.
std::optional<std::vector<Cell>> astar_path(const OccupancyGrid& grid, Cell start, Cell goal);

/// Length in meters of a cell path, summed from its straight and diagonal step counts.
double cell_path_length(const std::vector<Cell>& path, double resolution);

Cell start_cell(const GenParams& params);
Cell goal_cell(const GenParams& params);

/// Frees every non-border cell whose center lies within `radius` of `center`.
void carve_disc(OccupancyGrid& grid, Vec2 center, double radius);

/// Throws GenerationExhausted after params.max_attempts failed attempts.
WorldSpec generate_world(const GenParams& params);

}  // namespace barnav
