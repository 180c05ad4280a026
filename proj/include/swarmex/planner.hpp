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

#ifndef SWARMEX_PLANNER_HPP
#define SWARMEX_PLANNER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <queue>
#include <span>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "swarmex/common.hpp"
#include "swarmex/geometry.hpp"
#include "swarmex/grid_map.hpp"
#include "swarmex/sensor.hpp"

namespace swarmex {

struct Path {
  std::vector<Cell> cells;
  double cost = 0.0;
  // Motion commands to execute the path when the robot already faces the
  // first move direction; see path_energy for an arbitrary start heading.
  int step_count = 0;
};

struct PlannerConfig {
  // Premium on entering a never-observed cell.
  double unknown_multiplier = 1.2;
};

inline constexpr std::array<Cell, 8> kNeighbourSteps{
    Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1},
    Cell{1, 1}, Cell{1, -1}, Cell{-1, 1}, Cell{-1, -1}};

inline double octile_distance(Cell a, Cell b) {
  const int di = std::abs(a.i - b.i);
  const int dj = std::abs(a.j - b.j);
  const int lo = std::min(di, dj);
  const int hi = std::max(di, dj);
  return (hi - lo) + std::numbers::sqrt2 * lo;
}

namespace detail {

// Per-thread search buffers, reset lazily through an epoch stamp.
struct SearchScratch {
  std::vector<double> g;
  std::vector<std::int32_t> parent;
  std::vector<std::uint32_t> seen;
  std::vector<std::uint32_t> closed;
  std::uint32_t epoch = 0;

  void prepare(std::size_t n) {
    if (g.size() != n) {
      g.assign(n, 0.0);
      parent.assign(n, -1);
      seen.assign(n, 0);
      closed.assign(n, 0);
      epoch = 0;
    }
    if (++epoch == 0) {
      std::fill(seen.begin(), seen.end(), 0);
      std::fill(closed.begin(), closed.end(), 0);
      epoch = 1;
    }
  }
};

inline SearchScratch& search_scratch() {
  thread_local SearchScratch scratch;
  return scratch;
}

inline bool blocked(const OccupancyGrid& belief, std::size_t idx,
                    std::span<const std::size_t> extra) {
  if (belief.occupied_at(idx)) return true;
  return std::find(extra.begin(), extra.end(), idx) != extra.end();
}

// Cost of stepping from `from` by `step`, or nullopt if the move is illegal.
// Diagonal moves may not cut a corner whose orthogonal neighbours are blocked.
inline std::optional<double> step_cost(const OccupancyGrid& belief, Cell from,
                                       Cell step,
                                       std::span<const std::size_t> extra,
                                       const PlannerConfig& config) {
  const GridSpec& spec = belief.spec();
  const Cell to{from.i + step.i, from.j + step.j};
  if (!spec.in_bounds(to)) return std::nullopt;
  const std::size_t to_idx = spec.index(to);
  if (blocked(belief, to_idx, extra)) return std::nullopt;
  const bool diagonal = step.i != 0 && step.j != 0;
  if (diagonal) {
    if (blocked(belief, spec.index({from.i + step.i, from.j}), extra) ||
        blocked(belief, spec.index({from.i, from.j + step.j}), extra)) {
      return std::nullopt;
    }
  }
  const double base = diagonal ? std::numbers::sqrt2 : 1.0;
  const double mult =
      belief.state_at(to_idx) == CellState::Unknown ? config.unknown_multiplier
                                                    : 1.0;
  return base * mult;
}

inline std::vector<std::size_t> to_indices(const GridSpec& spec,
                                           std::span<const Cell> cells) {
  std::vector<std::size_t> out;
  out.reserve(cells.size());
  for (Cell c : cells) {
    if (spec.in_bounds(c)) out.push_back(spec.index(c));
  }
  return out;
}

}  // namespace detail

inline int path_energy(const Path& path, int start_heading_deg) {
  if (path.cells.size() < 2) return 0;
  int heading = normalize_heading(start_heading_deg);
  int steps = 0;
  for (std::size_t n = 1; n < path.cells.size(); ++n) {
    const Cell delta{path.cells[n].i - path.cells[n - 1].i,
                     path.cells[n].j - path.cells[n - 1].j};
    const int h = step_heading(delta);
    if (h < 0) throw InvalidQuery("path cells are not 8-adjacent");
    steps += turns_between(heading, h) + 1;
    heading = h;
  }
  return steps;
}

// Heading of the first move, or `fallback` for single-cell paths.
inline int first_move_heading(const Path& path, int fallback) {
  if (path.cells.size() < 2) return fallback;
  return step_heading({path.cells[1].i - path.cells[0].i,
                       path.cells[1].j - path.cells[0].j});
}

namespace detail {
inline Path finish_path(std::vector<Cell> cells, double cost) {
  Path p;
  p.cells = std::move(cells);
  p.cost = cost;
  p.step_count = path_energy(p, first_move_heading(p, 0));
  return p;
}
}  // namespace detail

/// A* over the 8-connected belief grid. Occupied cells (and `extra_blocked`)
/// are impassable, Unknown cells cost `unknown_multiplier` times the base
/// step, and the octile heuristic keeps the search admissible.
inline std::optional<Path> astar(const OccupancyGrid& belief, Cell start,
                                 Cell goal, const PlannerConfig& config = {},
                                 std::span<const Cell> extra_blocked = {}) {
  const GridSpec& spec = belief.spec();
  if (!spec.in_bounds(start)) throw InvalidQuery("start out of bounds");
  if (!spec.in_bounds(goal)) throw InvalidQuery("goal out of bounds");
  if (belief.state(start) == CellState::Occupied) {
    throw InvalidQuery("start cell is occupied");
  }
  const auto extra = detail::to_indices(spec, extra_blocked);
  if (start == goal) return detail::finish_path({start}, 0.0);
  if (detail::blocked(belief, spec.index(goal), extra)) return std::nullopt;

  auto& s = detail::search_scratch();
  s.prepare(spec.cell_count());
  using Entry = std::tuple<double, std::uint64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;
  const std::size_t start_idx = spec.index(start);
  const std::size_t goal_idx = spec.index(goal);
  s.g[start_idx] = 0.0;
  s.parent[start_idx] = -1;
  s.seen[start_idx] = s.epoch;
  open.emplace(octile_distance(start, goal), seq++, start_idx);
  while (!open.empty()) {
    const auto [f, order, idx] = open.top();
    open.pop();
    if (s.closed[idx] == s.epoch) continue;
    s.closed[idx] = s.epoch;
    if (idx == goal_idx) break;
    const Cell cur = spec.cell_of(idx);
    for (Cell step : kNeighbourSteps) {
      const auto cost = detail::step_cost(belief, cur, step, extra, config);
      if (!cost) continue;
      const Cell nb{cur.i + step.i, cur.j + step.j};
      const std::size_t nidx = spec.index(nb);
      if (s.closed[nidx] == s.epoch) continue;
      const double g = s.g[idx] + *cost;
      if (s.seen[nidx] != s.epoch || g < s.g[nidx]) {
        s.seen[nidx] = s.epoch;
        s.g[nidx] = g;
        s.parent[nidx] = static_cast<std::int32_t>(idx);
        open.emplace(g + octile_distance(nb, goal), seq++, nidx);
      }
    }
  }
  if (s.closed[goal_idx] != s.epoch) return std::nullopt;
  std::vector<Cell> cells;
  for (std::int64_t at = static_cast<std::int64_t>(goal_idx); at >= 0;
       at = s.parent[static_cast<std::size_t>(at)]) {
    cells.push_back(spec.cell_of(static_cast<std::size_t>(at)));
  }
  std::reverse(cells.begin(), cells.end());
  return detail::finish_path(std::move(cells), s.g[goal_idx]);
}

/// Single-source shortest paths from one cell under the same cost model as
/// astar. Lets many candidate tours share their first leg.
class ShortestPathTree {
 public:
  ShortestPathTree(const OccupancyGrid& belief, Cell source,
                   const PlannerConfig& config = {},
                   std::span<const Cell> extra_blocked = {})
      : spec_(belief.spec()), source_(source) {
    if (!spec_.in_bounds(source)) throw InvalidQuery("source out of bounds");
    if (belief.state(source) == CellState::Occupied) {
      throw InvalidQuery("source cell is occupied");
    }
    const auto extra = detail::to_indices(spec_, extra_blocked);
    const double inf = std::numeric_limits<double>::infinity();
    cost_.assign(spec_.cell_count(), inf);
    parent_.assign(spec_.cell_count(), -1);
    std::vector<std::uint8_t> done(spec_.cell_count(), 0);
    using Entry = std::tuple<double, std::uint64_t, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::uint64_t seq = 0;
    const std::size_t src = spec_.index(source);
    cost_[src] = 0.0;
    open.emplace(0.0, seq++, src);
    while (!open.empty()) {
      const auto [g, order, idx] = open.top();
      open.pop();
      if (done[idx]) continue;
      done[idx] = 1;
      const Cell cur = spec_.cell_of(idx);
      for (Cell step : kNeighbourSteps) {
        const auto c = detail::step_cost(belief, cur, step, extra, config);
        if (!c) continue;
        const std::size_t nidx = spec_.index({cur.i + step.i, cur.j + step.j});
        if (done[nidx]) continue;
        const double ng = g + *c;
        if (ng < cost_[nidx]) {
          cost_[nidx] = ng;
          parent_[nidx] = static_cast<std::int32_t>(idx);
          open.emplace(ng, seq++, nidx);
        }
      }
    }
  }

  Cell source() const { return source_; }
  bool reachable(Cell goal) const {
    return spec_.in_bounds(goal) && std::isfinite(cost_[spec_.index(goal)]);
  }
  double cost_to(Cell goal) const { return cost_[spec_.index(goal)]; }

  std::optional<Path> path_to(Cell goal) const {
    if (!reachable(goal)) return std::nullopt;
    std::vector<Cell> cells;
    for (std::int64_t at = static_cast<std::int64_t>(spec_.index(goal));
         at >= 0; at = parent_[static_cast<std::size_t>(at)]) {
      cells.push_back(spec_.cell_of(static_cast<std::size_t>(at)));
    }
    std::reverse(cells.begin(), cells.end());
    return detail::finish_path(std::move(cells), cost_to(goal));
  }

 private:
  GridSpec spec_;
  Cell source_;
  std::vector<double> cost_;
  std::vector<std::int32_t> parent_;
};

struct TourResult {
  std::optional<Path> path;
  int failed_leg = 0;  // 1-based index of the first unreachable leg
  explicit operator bool() const { return path.has_value(); }
};

inline void append_leg(Path& tour, const Path& leg) {
  if (tour.cells.empty()) {
    tour.cells = leg.cells;
  } else {
    tour.cells.insert(tour.cells.end(), leg.cells.begin() + 1, leg.cells.end());
  }
  tour.cost += leg.cost;
}

/// Visits `targets` in the given order, concatenating A* legs.
inline TourResult plan_tour(const OccupancyGrid& belief, Cell start,
                            std::span<const Cell> targets,
                            const PlannerConfig& config = {},
                            std::span<const Cell> extra_blocked = {}) {
  if (targets.empty()) throw InvalidQuery("plan_tour: no targets");
  Path tour;
  Cell from = start;
  for (std::size_t leg = 0; leg < targets.size(); ++leg) {
    auto p = astar(belief, from, targets[leg], config, extra_blocked);
    if (!p) return TourResult{std::nullopt, static_cast<int>(leg) + 1};
    append_leg(tour, *p);
    from = targets[leg];
  }
  tour.step_count = path_energy(tour, first_move_heading(tour, 0));
  return TourResult{std::move(tour), 0};
}

// ---------------------------------------------------------------------------
// Observation gain

/// Noise-free beam footprints of one scan taken from a cell center, for each
/// of the eight 45-degree headings. Offsets are relative to the scan cell and
/// listed in traversal order per beam; `counts` is false inside the blind zone
/// where an update would carry zero confidence.
class ScanFootprint {
 public:
  struct Offset {
    int di;
    int dj;
    bool counts;
  };
  using Beam = std::vector<Offset>;

  ScanFootprint(double cell_size_m, const LidarConfig& lidar) {
    const int reach =
        static_cast<int>(std::ceil(lidar.max_range_m / cell_size_m)) + 2;
    const GridSpec virtual_grid{2 * reach + 1, 2 * reach + 1, cell_size_m};
    const double ox = virtual_grid.center_x(reach);
    const double oy = virtual_grid.center_y(reach);
    for (int h = 0; h < 8; ++h) {
      auto& beams = by_heading_[static_cast<std::size_t>(h)];
      for (int k = 0; k < lidar.beam_count(); ++k) {
        const double angle = lidar.beam_angle(k, h * 45.0);
        const RayTrace trace = trace_ray(virtual_grid, ox, oy, angle,
                                         lidar.max_range_m,
                                         [](Cell) { return false; });
        const BeamGeometry geom{ox, oy, angle};
        Beam beam;
        beam.reserve(trace.cells.size());
        for (const TraversedCell& tc : trace.cells) {
          const auto [perp, along] = beam_offsets(geom, tc.cell, virtual_grid);
          const double conf = lateral_confidence(perp, cell_size_m) *
                              range_confidence(std::max(0.0, along), lidar);
          beam.push_back({tc.cell.i - reach, tc.cell.j - reach, conf > 0.0});
        }
        beams.push_back(std::move(beam));
      }
    }
  }

  const std::vector<Beam>& beams(int heading_deg) const {
    return by_heading_[static_cast<std::size_t>(normalize_heading(heading_deg) /
                                                45)];
  }

  static std::shared_ptr<const ScanFootprint> shared(double cell_size_m,
                                                     const LidarConfig& lidar) {
    using Key = std::tuple<double, double, double, double, double, double,
                           double, double>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const ScanFootprint>> cache;
    const Key key{cell_size_m,      lidar.max_range_m, lidar.blind_range_m,
                  lidar.fov_deg,    lidar.resolution_deg, lidar.ramp_in_m,
                  lidar.ramp_out_m, lidar.far_confidence};
    std::lock_guard lock(mutex);
    auto& slot = cache[key];
    if (!slot) slot = std::make_shared<const ScanFootprint>(cell_size_m, lidar);
    return slot;
  }

 private:
  std::array<std::vector<Beam>, 8> by_heading_;
};

/// Counts distinct Unknown cells that noise-free scans along a path would
/// sweep on a fixed belief. Unknown cells are transparent, Occupied cells
/// block. With memoization the per-(cell, heading) visible set is cached, so
/// the belief must not change during the estimator's lifetime.
class ObservationGainEstimator {
 public:
  ObservationGainEstimator(const OccupancyGrid& belief,
                           const LidarConfig& lidar, bool memoize = true)
      : belief_(&belief),
        footprint_(ScanFootprint::shared(belief.spec().cell_size_m, lidar)),
        memoize_(memoize) {}

  // Scans from every `stride`-th path cell (and always the last). The scan at
  // path cell n faces the arrival direction; the first faces start_heading
  // and a repeated cell keeps the heading it was reached with.
  std::size_t estimate(std::span<const Cell> cells, int start_heading_deg,
                       int stride = 1) const {
    if (cells.empty()) return 0;
    stride = std::max(1, stride);
    auto& scratch = stamps();
    const std::size_t n_cells = belief_->spec().cell_count();
    if (scratch.marks.size() != n_cells) {
      scratch.marks.assign(n_cells, 0);
      scratch.epoch = 0;
    }
    if (++scratch.epoch == 0) {
      std::fill(scratch.marks.begin(), scratch.marks.end(), 0);
      scratch.epoch = 1;
    }
    std::size_t gain = 0;
    int heading = normalize_heading(start_heading_deg);
    for (std::size_t n = 0; n < cells.size(); ++n) {
      if (n > 0 && cells[n] != cells[n - 1]) {
        heading = step_heading({cells[n].i - cells[n - 1].i,
                                cells[n].j - cells[n - 1].j});
        if (heading < 0) throw InvalidQuery("gain: path not 8-adjacent");
      }
      const bool last = n + 1 == cells.size();
      if (n % static_cast<std::size_t>(stride) != 0 && !last) continue;
      if (memoize_) {
        for (std::uint32_t idx : visible(cells[n], heading)) {
          if (scratch.marks[idx] != scratch.epoch) {
            scratch.marks[idx] = scratch.epoch;
            ++gain;
          }
        }
      } else {
        walk(cells[n], heading, [&](std::size_t idx) {
          if (scratch.marks[idx] != scratch.epoch) {
            scratch.marks[idx] = scratch.epoch;
            ++gain;
          }
        });
      }
    }
    return gain;
  }

 private:
  struct Stamps {
    std::vector<std::uint32_t> marks;
    std::uint32_t epoch = 0;
  };
  static Stamps& stamps() {
    thread_local Stamps s;
    return s;
  }

  template <class Visit>
  void walk(Cell origin, int heading, Visit&& visit) const {
    const GridSpec& spec = belief_->spec();
    for (const auto& beam : footprint_->beams(heading)) {
      for (const auto& off : beam) {
        const Cell c{origin.i + off.di, origin.j + off.dj};
        if (!spec.in_bounds(c)) break;
        const std::size_t idx = spec.index(c);
        if (belief_->occupied_at(idx)) break;
        if (off.counts && belief_->state_at(idx) == CellState::Unknown) {
          visit(idx);
        }
      }
    }
  }

  const std::vector<std::uint32_t>& visible(Cell origin, int heading) const {
    const std::uint64_t key =
        belief_->spec().index(origin) * 8u + static_cast<std::uint64_t>(heading / 45);
    {
      std::lock_guard lock(memo_mutex_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    std::vector<std::uint32_t> cells;
    std::vector<std::size_t> raw;
    walk(origin, heading, [&](std::size_t idx) { raw.push_back(idx); });
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    cells.assign(raw.begin(), raw.end());
    std::lock_guard lock(memo_mutex_);
    return memo_.try_emplace(key, std::move(cells)).first->second;
  }

  const OccupancyGrid* belief_;
  std::shared_ptr<const ScanFootprint> footprint_;
  bool memoize_;
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> memo_;
};

inline std::size_t estimate_observation_gain(const OccupancyGrid& belief,
                                             const Path& path,
                                             const LidarConfig& lidar,
                                             int start_heading_deg = 0,
                                             int stride = 1) {
  ObservationGainEstimator estimator(belief, lidar, /*memoize=*/false);
  return estimator.estimate(path.cells, start_heading_deg, stride);
}

}  // namespace swarmex

#endif  // SWARMEX_PLANNER_HPP
