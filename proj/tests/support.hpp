#pragma once

// Test-side reference implementations. Each one is written independently of
// the library code it checks: slower, simpler, and easy to audit.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "barnav/geometry.hpp"
#include "barnav/grid.hpp"
#include "barnav/worldgen.hpp"

namespace oracle {

using barnav::Cell;
using barnav::OccupancyGrid;
using barnav::Pose2D;
using barnav::Vec2;

// Forward Euler with many substeps.
inline Pose2D euler_integrate(Pose2D p, double v, double w, double duration, int substeps = 10000) {
  const double h = duration / substeps;
  for (int i = 0; i < substeps; ++i) {
    p.x += v * std::cos(p.theta) * h;
    p.y += v * std::sin(p.theta) * h;
    p.theta += w * h;
  }
  p.theta = std::atan2(std::sin(p.theta), std::cos(p.theta));
  return p;
}

// Closed-form arc of the unicycle from the origin pose.
inline Pose2D arc_pose(const Pose2D& p0, double v, double w, double t) {
  if (std::abs(w) < 1e-12) return {p0.x + v * t * std::cos(p0.theta), p0.y + v * t * std::sin(p0.theta), p0.theta};
  const double th = p0.theta + w * t;
  return {p0.x + v / w * (std::sin(th) - std::sin(p0.theta)), p0.y - v / w * (std::cos(th) - std::cos(p0.theta)),
          std::atan2(std::sin(th), std::cos(th))};
}

// Point sampled along the ray every `step_m`; first sample inside an occupied
// cell. Leaving the grid counts as no return.
inline double ray_march(const OccupancyGrid& g, Vec2 from, double angle, double range_max, double step_m = 1e-3) {
  const Vec2 d{std::cos(angle), std::sin(angle)};
  for (double s = 0.0; s <= range_max; s += step_m) {
    const Vec2 p = from + s * d;
    const double fc = (p.x - g.origin().x) / g.resolution(), fr = (p.y - g.origin().y) / g.resolution();
    const Cell c{static_cast<int>(std::floor(fc)), static_cast<int>(std::floor(fr))};
    if (!g.in_bounds(c)) return range_max;
    if (g.occupied(c)) return s;
  }
  return range_max;
}

// Length of the ray segment inside the occupied cell entered at distance r.
inline double chord_in_hit_cell(const OccupancyGrid& g, Vec2 from, double angle, double r) {
  const Vec2 d{std::cos(angle), std::sin(angle)};
  const Vec2 p = from + (r + 1e-9) * d;
  const Cell c{static_cast<int>(std::floor((p.x - g.origin().x) / g.resolution())),
               static_cast<int>(std::floor((p.y - g.origin().y) / g.resolution()))};
  const double x0 = g.origin().x + c.col * g.resolution(), y0 = g.origin().y + c.row * g.resolution();
  double lo = -1e300, hi = 1e300;
  const double o[2] = {from.x, from.y}, dir[2] = {d.x, d.y}, mn[2] = {x0, y0};
  for (int k = 0; k < 2; ++k) {
    if (std::abs(dir[k]) < 1e-15) continue;
    double t1 = (mn[k] - o[k]) / dir[k], t2 = (mn[k] + g.resolution() - o[k]) / dir[k];
    if (t1 > t2) std::swap(t1, t2);
    lo = std::max(lo, t1);
    hi = std::min(hi, t2);
  }
  return std::max(0.0, hi - lo);
}

// Point-in-rectangle from the corner polygon: inside iff on the inner side of
// all four edges (cross products), with a tiny tolerance for the boundary.
inline bool in_rect(Vec2 center, double heading, double half_len, double half_wid, Vec2 p) {
  const Vec2 u{std::cos(heading), std::sin(heading)}, n{-std::sin(heading), std::cos(heading)};
  const Vec2 corners[4] = {center + half_len * u + half_wid * n, center - half_len * u + half_wid * n,
                           center - half_len * u - half_wid * n, center + half_len * u - half_wid * n};
  for (int i = 0; i < 4; ++i) {
    const Vec2 a = corners[i], b = corners[(i + 1) % 4];
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross < -1e-12) return false;
  }
  return true;
}

// Dijkstra over all cells, 8-connected, no corner cutting; returns length in meters.
inline std::optional<double> dijkstra_length(const OccupancyGrid& g, Cell s, Cell t) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.size(), inf);
  using E = std::pair<double, std::size_t>;
  std::priority_queue<E, std::vector<E>, std::greater<>> pq;
  dist[g.index(s)] = 0.0;
  pq.emplace(0.0, g.index(s));
  while (!pq.empty()) {
    auto [d, i] = pq.top();
    pq.pop();
    if (d > dist[i]) continue;
    const Cell c = g.cell_at(i);
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (!dr && !dc) continue;
        const Cell n{c.col + dc, c.row + dr};
        if (!g.in_bounds(n) || g.occupied(n)) continue;
        if (dr && dc && (g.occupied({c.col + dc, c.row}) || g.occupied({c.col, c.row + dr}))) continue;
        const double nd = d + ((dr && dc) ? std::sqrt(2.0) : 1.0);
        if (nd < dist[g.index(n)] - 1e-12) {
          dist[g.index(n)] = nd;
          pq.emplace(nd, g.index(n));
        }
      }
  }
  if (dist[g.index(t)] == inf) return std::nullopt;
  return dist[g.index(t)] * g.resolution();
}

// Same search on integer (straight, diagonal) step counts, ordered by
// straight + diagonal * sqrt(2). The length is then formed once, so an
// optimal path found by any search reproduces it bit for bit.
inline std::optional<std::pair<long, long>> dijkstra_steps(const OccupancyGrid& g, Cell s, Cell t) {
  struct Label {
    long a = -1, b = -1;
    double key() const { return static_cast<double>(a) + static_cast<double>(b) * std::sqrt(2.0); }
  };
  std::vector<Label> best(g.size());
  std::vector<char> done(g.size(), 0);
  using E = std::pair<double, std::size_t>;
  std::priority_queue<E, std::vector<E>, std::greater<>> pq;
  best[g.index(s)] = {0, 0};
  pq.emplace(0.0, g.index(s));
  while (!pq.empty()) {
    const std::size_t i = pq.top().second;
    pq.pop();
    if (done[i]) continue;
    done[i] = 1;
    const Cell c = g.cell_at(i);
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (!dr && !dc) continue;
        const Cell n{c.col + dc, c.row + dr};
        if (!g.in_bounds(n) || g.occupied(n)) continue;
        if (dr && dc && (g.occupied({c.col + dc, c.row}) || g.occupied({c.col, c.row + dr}))) continue;
        Label cand = best[i];
        (dr && dc) ? ++cand.b : ++cand.a;
        Label& cur = best[g.index(n)];
        if (cur.a < 0 || cand.key() < cur.key() - 1e-9) {
          cur = cand;
          pq.emplace(cand.key(), g.index(n));
        }
      }
  }
  if (!done[g.index(t)]) return std::nullopt;
  return std::pair{best[g.index(t)].a, best[g.index(t)].b};
}

// Flood fill by 4-neighbours with an explicit stack.
inline bool reachable4(const OccupancyGrid& g, Cell s, Cell t) {
  std::vector<char> seen(g.size(), 0);
  std::vector<Cell> stack{s};
  seen[g.index(s)] = 1;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    if (c == t) return true;
    const Cell nbs[4] = {{c.col + 1, c.row}, {c.col - 1, c.row}, {c.col, c.row + 1}, {c.col, c.row - 1}};
    for (const Cell n : nbs)
      if (g.in_bounds(n) && !g.occupied(n) && !seen[g.index(n)]) {
        seen[g.index(n)] = 1;
        stack.push_back(n);
      }
  }
  return false;
}

// Cellular automaton written from the rule text: border occupied, Bernoulli
// interior in row-major order, synchronous Moore smoothing where outside
// counts as occupied.
inline std::vector<std::string> automaton_rows(int w, int h, double fill, int iters, int fill_thr, int clear_thr,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> g(h, std::vector<int>(w, 0));
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (r == 0 || c == 0 || r == h - 1 || c == w - 1) {
        g[r][c] = 1;
        continue;
      }
      const double u = static_cast<double>(rng() >> 11) / 9007199254740992.0;
      g[r][c] = u < fill ? 1 : 0;
    }
  for (int it = 0; it < iters; ++it) {
    auto next = g;
    for (int r = 1; r < h - 1; ++r)
      for (int c = 1; c < w - 1; ++c) {
        int n = 0;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc)
            if ((dr || dc) && g[r + dr][c + dc]) ++n;
        if (n >= fill_thr)
          next[r][c] = 1;
        else if (n <= clear_thr)
          next[r][c] = 0;
      }
    g = next;
  }
  std::vector<std::string> rows;  // top row first
  for (int r = h - 1; r >= 0; --r) {
    std::string s;
    for (int c = 0; c < w; ++c) s += g[r][c] ? '#' : '.';
    rows.push_back(s);
  }
  return rows;
}

inline std::vector<std::string> grid_rows(const OccupancyGrid& g) {
  std::vector<std::string> rows;
  for (int r = g.height() - 1; r >= 0; --r) {
    std::string s;
    for (int c = 0; c < g.width(); ++c) s += g.occupied({c, r}) ? '#' : '.';
    rows.push_back(s);
  }
  return rows;
}

}  // namespace oracle

namespace fixture {

// Builds a world from an ASCII map, top row first: '#' occupied, '.' free,
// 'S' start cell, 'G' goal cell.
inline barnav::WorldSpec from_ascii(const std::vector<std::string>& rows, double resolution, double start_theta) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  barnav::WorldSpec world;
  world.grid = barnav::OccupancyGrid(w, h, resolution);
  std::optional<barnav::Cell> s, t;
  for (int i = 0; i < h; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != w) throw std::invalid_argument("ragged map");
    const int r = h - 1 - i;
    for (int c = 0; c < w; ++c) {
      const char ch = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      world.grid.set_occupied({c, r}, ch == '#');
      if (ch == 'S') s = barnav::Cell{c, r};
      if (ch == 'G') t = barnav::Cell{c, r};
    }
  }
  if (!s || !t) throw std::invalid_argument("map needs S and G");
  const barnav::Vec2 sp = world.grid.cell_center(*s);
  world.start = {sp.x, sp.y, start_theta};
  world.goal = world.grid.cell_center(*t);
  const auto path = barnav::astar_path(world.grid, *s, *t);
  world.path_length = path && path->size() > 1 ? barnav::cell_path_length(*path, resolution)
                                               : std::max(barnav::distance(sp, world.goal), resolution);
  world.optimal_time = world.path_length / barnav::kOptimalSpeed;
  world.params.width = w;
  world.params.height = h;
  world.params.resolution = resolution;
  return world;
}

// Straight open corridor along +x: `length_m` between start and goal centers.
inline barnav::WorldSpec corridor(double length_m, double resolution = 0.1, int free_rows = 11) {
  const int cells = static_cast<int>(std::lround(length_m / resolution));
  const int w = cells + 11, h = free_rows + 2;
  std::vector<std::string> rows(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), '.'));
  for (int i = 0; i < h; ++i)
    for (int c = 0; c < w; ++c)
      if (i == 0 || i == h - 1 || c == 0 || c == w - 1) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = '#';
  const int mid = h / 2;
  rows[static_cast<std::size_t>(mid)][5] = 'S';
  rows[static_cast<std::size_t>(mid)][static_cast<std::size_t>(5 + cells)] = 'G';
  return from_ascii(rows, resolution, 0.0);
}

}  // namespace fixture
