/*
 * Copyright 2026 The swarmex Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Independent reference implementations used by the unit and acceptance
// suites. None of them call into the planner or the ray tracer.

#ifndef SWARMEX_TESTS_ORACLES_HPP
#define SWARMEX_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "swarmex/grid_map.hpp"
#include "swarmex/sensor.hpp"

namespace oracle {

using swarmex::Cell;
using swarmex::CellState;
using swarmex::GridSpec;
using swarmex::OccupancyGrid;

// Path cost scaled by 5 and held exactly as a + b*sqrt(2), so that
// orthogonal (5), diagonal (5 sqrt 2), and the 1.2 unknown premium (6 and
// 6 sqrt 2) stay integral.
struct ExactCost {
  std::int64_t a = 0;
  std::int64_t b = 0;

  ExactCost operator+(ExactCost o) const { return {a + o.a, b + o.b}; }
  bool operator==(const ExactCost&) const = default;
  double value() const { return (a + b * std::sqrt(2.0)) / 5.0; }
};

// Sign of a + b sqrt(2) using integers only.
inline int sign(std::int64_t a, std::int64_t b) {
  if (a >= 0 && b >= 0) return (a == 0 && b == 0) ? 0 : 1;
  if (a <= 0 && b <= 0) return -1;
  const std::int64_t a2 = a * a;
  const std::int64_t b2 = 2 * b * b;
  if (a2 == b2) return 0;
  if (a > 0) return a2 > b2 ? 1 : -1;
  return b2 > a2 ? 1 : -1;
}

inline bool less(ExactCost x, ExactCost y) { return sign(x.a - y.a, x.b - y.b) < 0; }

inline bool cell_blocked(const OccupancyGrid& g, Cell c) {
  return !g.in_bounds(c) || g.state(c) == CellState::Occupied;
}

inline std::optional<ExactCost> move_cost(const OccupancyGrid& g, Cell from,
                                          int di, int dj) {
  const Cell to{from.i + di, from.j + dj};
  if (cell_blocked(g, to)) return std::nullopt;
  const bool diag = di != 0 && dj != 0;
  if (diag && (cell_blocked(g, {from.i + di, from.j}) ||
               cell_blocked(g, {from.i, from.j + dj}))) {
    return std::nullopt;
  }
  const bool unknown = g.state(to) == CellState::Unknown;
  const std::int64_t unit = unknown ? 6 : 5;
  return diag ? ExactCost{0, unit} : ExactCost{unit, 0};
}

/// Exact cost of a given cell sequence under the planner's cost model, or
/// nullopt if some step is illegal.
inline std::optional<ExactCost> path_cost(const OccupancyGrid& g,
                                          const std::vector<Cell>& cells) {
  ExactCost total;
  for (std::size_t n = 1; n < cells.size(); ++n) {
    const int di = cells[n].i - cells[n - 1].i;
    const int dj = cells[n].j - cells[n - 1].j;
    if (std::abs(di) > 1 || std::abs(dj) > 1 || (di == 0 && dj == 0)) {
      return std::nullopt;
    }
    auto c = move_cost(g, cells[n - 1], di, dj);
    if (!c) return std::nullopt;
    total = total + *c;
  }
  return total;
}

/// Quadratic-time Dijkstra with exact costs: repeatedly settles the cheapest
/// unsettled cell by linear scan.
inline std::optional<ExactCost> shortest_cost(const OccupancyGrid& g, Cell start,
                                              Cell goal) {
  const GridSpec& s = g.spec();
  const std::size_t n = s.cell_count();
  std::vector<std::optional<ExactCost>> dist(n);
  std::vector<bool> done(n, false);
  dist[s.index(start)] = ExactCost{};
  for (;;) {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k] || !dist[k]) continue;
      if (!best || less(*dist[k], *dist[*best])) best = k;
    }
    if (!best) break;
    done[*best] = true;
    const Cell cur = s.cell_of(*best);
    if (cur == goal) return dist[*best];
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        auto c = move_cost(g, cur, di, dj);
        if (!c) continue;
        const std::size_t k = s.index({cur.i + di, cur.j + dj});
        const ExactCost cand = *dist[*best] + *c;
        if (!dist[k] || less(cand, *dist[k])) dist[k] = cand;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Ray casting

struct RayOracleResult {
  std::vector<Cell> swept;
  std::optional<Cell> hit;
};

/// Samples the segment every quarter cell plus its end point. When two
/// consecutive samples differ in both indices, the cell that was passed in
/// between is decided by which grid line the segment crosses first.
inline RayOracleResult dense_ray(const OccupancyGrid& truth, double x0,
                                 double y0, double angle_deg, double range) {
  const GridSpec& s = truth.spec();
  const double cs = s.cell_size_m;
  const double rad = angle_deg * std::acos(-1.0) / 180.0;
  double dx = std::sin(rad);
  double dy = std::cos(rad);
  if (std::abs(dx) < 1e-12) dx = 0.0;
  if (std::abs(dy) < 1e-12) dy = 0.0;
  auto cell_at = [&](double t) {
    return Cell{static_cast<int>(std::floor((x0 + t * dx) / cs)),
                static_cast<int>(std::floor((y0 + t * dy) / cs))};
  };
  std::vector<Cell> seq{cell_at(0.0)};
  auto push = [&](Cell c) {
    if (!(c == seq.back())) seq.push_back(c);
  };
  const double step = cs / 4.0;
  std::vector<double> ts;
  for (int k = 1; k * step < range; ++k) ts.push_back(k * step);
  ts.push_back(std::nextafter(range, 0.0));
  for (double t : ts) {
    const Cell prev = seq.back();
    const Cell next = cell_at(t);
    if (next.i != prev.i && next.j != prev.j) {
      const double bx = (next.i > prev.i ? next.i : prev.i) * cs;
      const double by = (next.j > prev.j ? next.j : prev.j) * cs;
      const double tx = (bx - x0) / dx;
      const double ty = (by - y0) / dy;
      if (tx < ty - 1e-9) push({next.i, prev.j});
      else if (ty < tx - 1e-9) push({prev.i, next.j});
    }
    push(next);
  }
  RayOracleResult out;
  for (Cell c : seq) {
    if (!s.in_bounds(c)) break;
    if (truth.truth_occupied(c)) {
      out.hit = c;
      break;
    }
    out.swept.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Observation gain

/// Brute-force gain: dense-sampled noise-free beams against an opaque layer
/// built from the belief's Occupied cells, counting distinct Unknown cells
/// whose centre lies past the blind zone. Scans are taken at every
/// `stride`-th cell and at the last one; each faces the direction the cell was
/// entered from, the first faces `start_heading`.
inline std::size_t sweep_gain(const OccupancyGrid& belief,
                              const std::vector<Cell>& cells, int start_heading,
                              const swarmex::LidarConfig& lidar, int stride = 1) {
  const GridSpec& s = belief.spec();
  OccupancyGrid opaque(s);
  std::vector<std::uint8_t> mask(s.cell_count(), 0);
  for (std::size_t k = 0; k < mask.size(); ++k) {
    mask[k] = belief.state_at(k) == CellState::Occupied ? 1 : 0;
  }
  opaque.set_truth(mask);
  const double deg = 180.0 / std::acos(-1.0);
  std::set<std::size_t> seen;
  double heading = start_heading;
  for (std::size_t n = 0; n < cells.size(); ++n) {
    if (n > 0 && cells[n] != cells[n - 1]) {
      heading = std::atan2(cells[n].i - cells[n - 1].i,
                           cells[n].j - cells[n - 1].j) * deg;
      heading = std::round(heading);
    }
    if (n % static_cast<std::size_t>(stride) != 0 && n + 1 != cells.size()) {
      continue;
    }
    const double x = s.center_x(cells[n].i);
    const double y = s.center_y(cells[n].j);
    const int beams =
        static_cast<int>(std::floor(lidar.fov_deg / lidar.resolution_deg + 1e-9)) + 1;
    for (int k = 0; k < beams; ++k) {
      double a = std::fmod(heading - lidar.fov_deg / 2.0 + k * lidar.resolution_deg,
                           360.0);
      if (a < 0) a += 360.0;
      const auto ray = dense_ray(opaque, x, y, a, lidar.max_range_m);
      const double rad = a / deg;
      for (Cell c : ray.swept) {
        const double along = (s.center_x(c.i) - x) * std::sin(rad) +
                             (s.center_y(c.j) - y) * std::cos(rad);
        if (along > lidar.blind_range_m + 1e-12 &&
            belief.state(c) == CellState::Unknown) {
          seen.insert(s.index(c));
        }
      }
    }
  }
  return seen.size();
}

// ---------------------------------------------------------------------------
// Scene builders

/// Closed-perimeter truth grid with interior obstacles at `density`.
inline OccupancyGrid random_truth(int w, int h, double cs, double density,
                                  std::mt19937_64& rng) {
  OccupancyGrid g(GridSpec{w, h, cs});
  std::vector<std::uint8_t> mask(g.spec().cell_count(), 0);
  std::bernoulli_distribution wall(density);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const bool edge = i == 0 || j == 0 || i == w - 1 || j == h - 1;
      mask[g.spec().index({i, j})] = edge || wall(rng) ? 1 : 0;
    }
  }
  g.set_truth(std::move(mask));
  return g;
}

/// Belief grid whose cells are Occupied with probability `density` and
/// otherwise an even mix of Empty and Unknown.
inline OccupancyGrid random_belief(int w, int h, double density,
                                   std::mt19937_64& rng) {
  OccupancyGrid g(GridSpec{w, h, 0.1});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const double r = u(rng);
      if (r < density) g.set_log_odds({i, j}, 2.0);
      else if (r < density + (1.0 - density) / 2.0) g.set_log_odds({i, j}, -2.0);
    }
  }
  return g;
}

inline std::vector<Cell> free_cells(const OccupancyGrid& g) {
  std::vector<Cell> out;
  for (int j = 0; j < g.spec().height_cells; ++j) {
    for (int i = 0; i < g.spec().width_cells; ++i) {
      const Cell c{i, j};
      if (g.has_truth() ? !g.truth_occupied(c)
                        : g.state(c) != CellState::Occupied) {
        out.push_back(c);
      }
    }
  }
  return out;
}

}  // namespace oracle

#endif  // SWARMEX_TESTS_ORACLES_HPP
