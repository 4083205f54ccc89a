#include "barnav/worldgen.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <queue>
#include <string>
#include <tuple>

#include "barnav/error.hpp"
#include "barnav/rng.hpp"

namespace barnav {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

bool is_border(const OccupancyGrid& g, Cell c) {
  return c.col == 0 || c.row == 0 || c.col == g.width() - 1 || c.row == g.height() - 1;
}

int occupied_neighbors(const OccupancyGrid& g, Cell c) {
  int n = 0;
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const Cell nb{c.col + dc, c.row + dr};
      // Outside the grid counts as wall.
      if (!g.in_bounds(nb) || g.occupied(nb)) ++n;
    }
  return n;
}


double octile(Cell a, Cell b) {
  const int dx = std::abs(a.col - b.col), dy = std::abs(a.row - b.row);
  return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

}  // namespace

void GenParams::validate() const {
  if (!(initial_fill >= 0.0 && initial_fill <= 1.0))
    throw NavError(ErrorKind::InvalidArgument, "initial_fill must be in [0,1]");
  if (!(fill_threshold > clear_threshold))
    throw NavError(ErrorKind::InvalidArgument, "fill_threshold must exceed clear_threshold");
  if (width < 10 || height < 10) throw NavError(ErrorKind::InvalidArgument, "grid must be at least 10x10");
  if (smoothing_iterations < 0) throw NavError(ErrorKind::InvalidArgument, "smoothing_iterations < 0");
  if (!(resolution > 0.0)) throw NavError(ErrorKind::InvalidArgument, "resolution must be > 0");
  if (!(clearance_radius >= 0.0)) throw NavError(ErrorKind::InvalidArgument, "clearance_radius < 0");
  if (max_attempts < 1) throw NavError(ErrorKind::InvalidArgument, "max_attempts must be >= 1");
  if (2 * (start_cell(*this).row + 1) > height)
    throw NavError(ErrorKind::InvalidArgument, "grid too short for the start/goal clearance");
}

OccupancyGrid smooth_once(const OccupancyGrid& grid, int fill_threshold, int clear_threshold) {
  OccupancyGrid next = grid;
  for (int row = 1; row < grid.height() - 1; ++row)
    for (int col = 1; col < grid.width() - 1; ++col) {
      const Cell c{col, row};
      const int n = occupied_neighbors(grid, c);
      if (n >= fill_threshold)
        next.set_occupied(c, true);
      else if (n <= clear_threshold)
        next.set_occupied(c, false);
    }
  return next;
}

OccupancyGrid cellular_automaton(const GenParams& params, std::mt19937_64& rng) {
  OccupancyGrid grid(params.width, params.height, params.resolution);
  for (int row = 0; row < grid.height(); ++row)
    for (int col = 0; col < grid.width(); ++col) {
      const Cell c{col, row};
      if (is_border(grid, c)) {
        grid.set_occupied(c, true);
      } else {
        // Draw before comparing so the stream position never depends on the fill value.
        const double u = unit_uniform(rng);
        grid.set_occupied(c, u < params.initial_fill);
      }
    }
  for (int i = 0; i < params.smoothing_iterations; ++i)
    grid = smooth_once(grid, params.fill_threshold, params.clear_threshold);
  return grid;
}

bool flood_fill_connected(const OccupancyGrid& grid, Cell start, Cell goal) {
  if (!grid.in_bounds(start) || !grid.in_bounds(goal))
    throw NavError(ErrorKind::InvalidArgument, "flood fill endpoint out of bounds");
  if (grid.occupied(start) || grid.occupied(goal))
    throw NavError(ErrorKind::CellOccupied, "flood fill endpoint is occupied");
  std::vector<bool> seen(grid.size(), false);
  std::deque<Cell> frontier{start};
  seen[grid.index(start)] = true;
  constexpr int kDc[4] = {1, -1, 0, 0};
  constexpr int kDr[4] = {0, 0, 1, -1};
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop_front();
    if (c == goal) return true;
    for (int k = 0; k < 4; ++k) {
      const Cell nb{c.col + kDc[k], c.row + kDr[k]};
      if (!grid.in_bounds(nb) || grid.occupied(nb) || seen[grid.index(nb)]) continue;
      seen[grid.index(nb)] = true;
      frontier.push_back(nb);
    }
  }
  return false;
}

std::optional<std::vector<Cell>> astar_path(const OccupancyGrid& grid, Cell start, Cell goal) {
  if (!grid.in_bounds(start) || !grid.in_bounds(goal) || grid.occupied(start) || grid.occupied(goal))
    return std::nullopt;

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(grid.size(), inf);
  std::vector<std::size_t> parent(grid.size(), std::numeric_limits<std::size_t>::max());
  std::vector<bool> closed(grid.size(), false);

  // (f, insertion order, cell index): ties resolve to the earliest push.
  using Entry = std::tuple<double, std::uint64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t pushes = 0;
  const std::size_t s = grid.index(start), t = grid.index(goal);
  g[s] = 0.0;
  open.emplace(octile(start, goal), pushes++, s);

  while (!open.empty()) {
    const auto [f, order, idx] = open.top();
    open.pop();
    if (closed[idx]) continue;
    closed[idx] = true;
    if (idx == t) break;
    const Cell c = grid.cell_at(idx);
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const Cell nb{c.col + dc, c.row + dr};
        if (!grid.in_bounds(nb) || grid.occupied(nb)) continue;
        const bool diagonal = dr != 0 && dc != 0;
        if (diagonal && (grid.occupied({c.col + dc, c.row}) || grid.occupied({c.col, c.row + dr})))
          continue;
        const std::size_t ni = grid.index(nb);
        if (closed[ni]) continue;
        const double cand = g[idx] + (diagonal ? kSqrt2 : 1.0);
        if (cand < g[ni]) {
          g[ni] = cand;
          parent[ni] = idx;
          open.emplace(cand + octile(nb, goal), pushes++, ni);
        }
      }
  }
  if (!closed[t]) return std::nullopt;

  std::vector<Cell> path;
  for (std::size_t i = t; i != s; i = parent[i]) path.push_back(grid.cell_at(i));
  path.push_back(start);
  return std::vector<Cell>(path.rbegin(), path.rend());
}

double cell_path_length(const std::vector<Cell>& path, double resolution) {
  long straight = 0, diagonal = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const bool diag = path[i].col != path[i - 1].col && path[i].row != path[i - 1].row;
    (diag ? diagonal : straight) += 1;
  }
  return (static_cast<double>(straight) + static_cast<double>(diagonal) * kSqrt2) * resolution;
}

Cell start_cell(const GenParams& params) {
  const int row = static_cast<int>(std::floor(params.clearance_radius / params.resolution)) + 1;
  return {params.width / 2, row};
}

Cell goal_cell(const GenParams& params) {
  const Cell s = start_cell(params);
  return {params.width / 2, params.height - 1 - s.row};
}

void carve_disc(OccupancyGrid& grid, Vec2 center, double radius) {
  for (int row = 1; row < grid.height() - 1; ++row)
    for (int col = 1; col < grid.width() - 1; ++col) {
      const Cell c{col, row};
      if (distance(grid.cell_center(c), center) <= radius) grid.set_occupied(c, false);
    }
}

WorldSpec generate_world(const GenParams& params) {
  params.validate();
  const Cell s = start_cell(params), t = goal_cell(params);
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    std::mt19937_64 rng(derive_seed(params.seed, "worldgen", static_cast<std::uint64_t>(attempt)));
    OccupancyGrid grid = cellular_automaton(params, rng);
    carve_disc(grid, grid.cell_center(s), params.clearance_radius);
    carve_disc(grid, grid.cell_center(t), params.clearance_radius);
    if (!flood_fill_connected(grid, s, t)) continue;
    const auto path = astar_path(grid, s, t);
    if (!path) continue;

    WorldSpec world;
    world.start = {grid.cell_center(s).x, grid.cell_center(s).y, kPi / 2.0};
    world.goal = grid.cell_center(t);
    world.path_length = cell_path_length(*path, params.resolution);
    world.optimal_time = world.path_length / kOptimalSpeed;
    world.grid = std::move(grid);
    world.params = params;
    return world;
  }
  throw NavError(ErrorKind::GenerationExhausted,
                 "no connected world after " + std::to_string(params.max_attempts) + " attempts");
}

}  // namespace barnav
