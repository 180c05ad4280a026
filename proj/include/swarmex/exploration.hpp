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

#ifndef SWARMEX_EXPLORATION_HPP
#define SWARMEX_EXPLORATION_HPP

#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmex/grid_map.hpp"
#include "swarmex/metaheuristics/registry.hpp"
#include "swarmex/metaheuristics/run.hpp"
#include "swarmex/planner.hpp"
#include "swarmex/robot.hpp"
#include "swarmex/sensor.hpp"

namespace swarmex {

struct ExplorationConfig {
  int k_targets = 1;
  LidarConfig lidar;
  PlannerConfig planner;
  InverseSensorModel sensor_model;
  // Scan spacing, in path cells, for the gain estimate. 0 picks roughly one
  // scan per half metre.
  int gain_stride = 0;
  double done_rate = 0.99;

  int effective_stride(double cell_size_m) const {
    if (gain_stride > 0) return gain_stride;
    return std::max(1, static_cast<int>(std::lround(0.5 / cell_size_m)));
  }
};

/// Nearest cell to `c` that the belief does not mark Occupied, searching
/// square rings of growing radius. Within a ring the smallest Euclidean
/// distance wins, then the first in scan order. Returns `c` itself when it is
/// free or when no free cell exists.
inline Cell snap_to_free(const OccupancyGrid& belief, Cell c) {
  const GridSpec& spec = belief.spec();
  if (!belief.occupied_at(spec.index(c))) return c;
  const int max_r = std::max(spec.width_cells, spec.height_cells);
  for (int r = 1; r <= max_r; ++r) {
    std::optional<Cell> best;
    int best_d2 = 0;
    for (int dj = -r; dj <= r; ++dj) {
      for (int di = -r; di <= r; ++di) {
        if (std::max(std::abs(di), std::abs(dj)) != r) continue;
        const Cell q{c.i + di, c.j + dj};
        if (!spec.in_bounds(q) || belief.occupied_at(spec.index(q))) continue;
        const int d2 = di * di + dj * dj;
        if (!best || d2 < best_d2) {
          best = q;
          best_d2 = d2;
        }
      }
    }
    if (best) return *best;
  }
  return c;
}

/// Gene pairs (x, y) in metres to target cells, clamped into the grid and
/// snapped off Occupied cells.
inline std::vector<Cell> decode(std::span<const double> genes,
                                const OccupancyGrid& belief) {
  const GridSpec& spec = belief.spec();
  std::vector<Cell> out;
  out.reserve(genes.size() / 2);
  for (std::size_t n = 0; n + 1 < genes.size(); n += 2) {
    Cell c = spec.cell_at(genes[n], genes[n + 1]);
    c.i = std::clamp(c.i, 0, spec.width_cells - 1);
    c.j = std::clamp(c.j, 0, spec.height_cells - 1);
    out.push_back(snap_to_free(belief, c));
  }
  return out;
}

inline mh::Bounds target_bounds(const GridSpec& spec, int k_targets) {
  mh::Bounds b;
  for (int n = 0; n < k_targets; ++n) {
    b.lower.push_back(0.0);
    b.upper.push_back(spec.width_m());
    b.lower.push_back(0.0);
    b.upper.push_back(spec.height_m());
  }
  return b;
}

struct CandidateAssessment {
  double fitness = 0.0;
  bool reachable = false;
  bool feasible = false;
  std::size_t gain = 0;
  int energy = 0;
  std::vector<Cell> targets;
  Path tour;
};

/// Remaining-unknown fitness of a target list on a frozen belief. Tours that
/// cannot be planned score the penalty weight; tours needing more energy than
/// remains get the penalty added on top.
class ExplorationObjective {
 public:
  ExplorationObjective(OccupancyGrid snapshot, Cell start, int start_heading,
                       int k_targets, int remaining_energy,
                       const ExplorationConfig& config)
      : state_(std::make_shared<State>()) {
    if (k_targets < 1) throw ConfigError("k_targets must be >= 1");
    State& s = *state_;
    s.belief = std::move(snapshot);
    s.start = start;
    s.heading = normalize_heading(start_heading);
    s.k = k_targets;
    s.remaining = remaining_energy;
    s.config = config;
    s.unknown = count_unknown(s.belief);
    s.penalty = static_cast<double>(s.belief.spec().interior_count()) + 1.0;
    s.stride = config.effective_stride(s.belief.spec().cell_size_m);
    s.tree.emplace(s.belief, start, config.planner);
    s.gain.emplace(s.belief, config.lidar, /*memoize=*/true);
  }

  double penalty_weight() const { return state_->penalty; }
  std::size_t unknown_count() const { return state_->unknown; }
  const OccupancyGrid& belief() const { return state_->belief; }
  mh::Bounds bounds() const {
    return target_bounds(state_->belief.spec(), state_->k);
  }
  int k_targets() const { return state_->k; }

  double operator()(std::span<const double> genes) const {
    return assess(genes).fitness;
  }

  CandidateAssessment assess(std::span<const double> genes) const {
    const State& s = *state_;
    if (genes.size() != static_cast<std::size_t>(2 * s.k)) {
      throw ConfigError("candidate length does not match 2k");
    }
    CandidateAssessment a;
    a.targets = decode(genes, s.belief);
    auto first = s.tree->path_to(a.targets.front());
    if (!first) {
      a.fitness = s.penalty;
      return a;
    }
    a.tour = std::move(*first);
    for (std::size_t n = 1; n < a.targets.size(); ++n) {
      auto leg = astar(s.belief, a.targets[n - 1], a.targets[n],
                       s.config.planner);
      if (!leg) {
        a.fitness = s.penalty;
        return a;
      }
      append_leg(a.tour, *leg);
    }
    a.reachable = true;
    a.energy = path_energy(a.tour, s.heading);
    a.tour.step_count = a.energy;
    if (a.tour.cells.size() > 1) {
      const std::span<const Cell> after_start(a.tour.cells.data() + 1,
                                              a.tour.cells.size() - 1);
      a.gain = s.gain->estimate(after_start,
                                first_move_heading(a.tour, s.heading), s.stride);
    }
    a.feasible = a.energy <= s.remaining;
    a.fitness = static_cast<double>(s.unknown) - static_cast<double>(a.gain) +
                (a.feasible ? 0.0 : s.penalty);
    return a;
  }

 private:
  struct State {
    OccupancyGrid belief;
    Cell start;
    int heading = 0;
    int k = 1;
    int remaining = 0;
    ExplorationConfig config;
    std::size_t unknown = 0;
    double penalty = 1.0;
    int stride = 1;
    std::optional<ShortestPathTree> tree;
    std::optional<ObservationGainEstimator> gain;
  };
  std::shared_ptr<State> state_;
};

/// Optimizer settings used for one target selection.
struct SelectionConfig {
  std::string algorithm = "xboa";
  mh::ParamOverrides params;
  int population_size = 20;
  int max_generations = 30;
  int early_stop_patience = 10;
  unsigned threads = 1;
};

struct SelectionOutcome {
  std::vector<Cell> targets;
  CandidateAssessment best;
  mh::RunResult run;
};

/// Belief copy used for planning and fitness: the robot's own cell is never
/// treated as Occupied.
inline OccupancyGrid planning_view(const OccupancyGrid& shared, Cell robot_cell,
                                   const InverseSensorModel& model = {}) {
  OccupancyGrid view = shared.snapshot();
  if (view.state(robot_cell) == CellState::Occupied) {
    view.set_log_odds(robot_cell, model.miss_increment);
  }
  return view;
}

/// Runs the optimizer over a frozen copy of the shared map. Throws
/// NoFeasibleTarget when no candidate escapes the penalty.
inline SelectionOutcome select_targets(const RobotState& robot,
                                       const OccupancyGrid& shared,
                                       const SelectionConfig& sel,
                                       const ExplorationConfig& config,
                                       Rng& population_rng, Rng& algorithm_rng) {
  if (robot.energy_steps <= 0) {
    throw NoFeasibleTarget("robot " + std::to_string(robot.id) +
                           " has no energy");
  }
  ExplorationObjective objective(
      planning_view(shared, robot.cell, config.sensor_model), robot.cell,
      robot.heading_deg, config.k_targets, robot.energy_steps, config);
  const mh::Bounds bounds = objective.bounds();
  mh::RunConfig rc;
  rc.population_size = sel.population_size;
  rc.max_generations = sel.max_generations;
  rc.early_stop_patience = sel.early_stop_patience;
  rc.threads = sel.threads;
  std::vector<std::vector<double>> initial;
  initial.reserve(static_cast<std::size_t>(sel.population_size));
  for (int n = 0; n < sel.population_size; ++n) {
    std::vector<double> g(bounds.dim());
    for (std::size_t d = 0; d < g.size(); ++d) {
      g[d] = bounds.lower[d] + uniform01(population_rng) * bounds.width(d);
    }
    initial.push_back(std::move(g));
  }
  rc.initial_population = std::move(initial);
  auto algorithm =
      mh::make_algorithm(sel.algorithm, sel.population_size, sel.params);
  SelectionOutcome out;
  out.run = mh::run(*algorithm,
                    [objective](std::span<const double> g) { return objective(g); },
                    bounds, rc, algorithm_rng);
  if (!(out.run.best.value() < objective.penalty_weight())) {
    throw NoFeasibleTarget("robot " + std::to_string(robot.id) +
                           ": every candidate is infeasible");
  }
  out.best = objective.assess(out.run.best.genes);
  out.targets = out.best.targets;
  return out;
}

// ---------------------------------------------------------------------------
// Mission

struct MissionConfig {
  int robots = 1;
  // Start poses; missing entries default to the first pose shifted east by
  // one cell per robot id.
  std::vector<Pose> starts{Pose{1.0, 1.0, 0.0}};
  int energy = 1500;
  SelectionConfig selection;
  ExplorationConfig exploration;
  std::uint64_t seed = 25;
  // Hard stop on the tick counter; 0 picks a bound from the energy budget.
  int max_ticks = 0;
};

struct TickRecord {
  int tick = 0;
  int robot_id = 0;
  int steps_used = 0;
  double exploration_rate = 0.0;
  std::uint64_t fitevals_cum = 0;
  Cell cell;
  int heading_deg = 0;
  int energy = 0;
  Mode mode = Mode::Idle;
  double computation_ms_cum = 0.0;  // not byte-stable
};

struct RoundRecord {
  int round = 0;
  int robot_id = 0;
  int tick = 0;
  std::uint64_t initial_population_hash = 0;
  double best_fitness = 0.0;
  std::size_t expected_gain = 0;
  std::vector<mh::GenerationRecord> history;
};

struct MissionResult {
  std::vector<TickRecord> series;
  std::vector<RoundRecord> rounds;
  std::vector<RobotState> robots;
  OccupancyGrid final_belief;
  int ticks = 0;
  double final_rate = 0.0;
  std::uint64_t fitevals = 0;
  int steps_total = 0;
  double computation_ms = 0.0;
  double wall_ms = 0.0;
};

inline std::vector<Pose> resolve_starts(const MissionConfig& cfg,
                                        const GridSpec& spec) {
  if (cfg.robots < 1) throw ConfigError("at least one robot is required");
  const Pose base = cfg.starts.empty() ? Pose{1.0, 1.0, 0.0} : cfg.starts.front();
  std::vector<Pose> out;
  for (int id = 0; id < cfg.robots; ++id) {
    if (static_cast<std::size_t>(id) < cfg.starts.size()) {
      out.push_back(cfg.starts[static_cast<std::size_t>(id)]);
    } else {
      const Cell c = spec.cell_at(base.x_m, base.y_m);
      out.push_back({spec.center_x(c.i + id), spec.center_y(c.j),
                     base.heading_deg});
    }
  }
  return out;
}

/// Runs robots round-robin on a shared belief until the exploration target is
/// reached, every robot is Done, or the tick guard trips.
inline MissionResult run_mission(const OccupancyGrid& truth,
                                 const MissionConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const auto wall0 = Clock::now();
  if (!truth.has_truth()) throw ConfigError("mission map has no truth layer");
  const GridSpec& spec = truth.spec();
  const ExplorationConfig& ex = cfg.exploration;
  ex.lidar.validate();

  OccupancyGrid shared = truth.blank_belief();
  std::vector<RobotState> robots;
  struct Streams {
    Rng population, algorithm, sensor;
  };
  std::vector<Streams> streams;
  const auto starts = resolve_starts(cfg, spec);
  for (int id = 0; id < cfg.robots; ++id) {
    RobotState r = make_robot(id, spec, starts[static_cast<std::size_t>(id)],
                              cfg.energy);
    if (truth.truth_occupied(r.cell)) {
      throw InvalidPose("robot " + std::to_string(id) + " starts inside a wall");
    }
    for (const RobotState& q : robots) {
      if (q.cell == r.cell) throw InvalidPose("two robots share a start cell");
    }
    robots.push_back(r);
    const auto base = static_cast<std::uint64_t>(id) * 3;
    streams.push_back({make_stream(cfg.seed, base + 1),
                       make_stream(cfg.seed, base + 2),
                       make_stream(cfg.seed, base + 3)});
  }

  auto scan = [&](RobotState& r) {
    const LidarScan s =
        simulate_scan(truth, r.pose(spec), ex.lidar, streams[r.id].sensor);
    integrate_scan(shared, s, ex.sensor_model);
  };

  MissionResult result;
  int round = 0;
  int tick = 0;
  auto record = [&] {
    const double rate = exploration_rate(shared);
    for (const RobotState& r : robots) {
      result.series.push_back({tick, r.id, r.steps_used(), rate, r.fitevals,
                               r.cell, r.heading_deg, r.energy_steps, r.mode,
                               r.computation_ms});
    }
  };

  for (RobotState& r : robots) {
    scan(r);
    if (r.energy_steps <= 0) r.mode = Mode::Done;
  }
  record();

  NavServices nav;
  nav.done_rate = ex.done_rate;
  nav.exploration_rate = [&] { return exploration_rate(shared); };
  nav.select_targets = [&](RobotState& r) -> std::optional<TargetSelection> {
    const auto t0 = Clock::now();
    std::optional<TargetSelection> out;
    try {
      auto sel = select_targets(r, shared, cfg.selection, ex,
                                streams[r.id].population,
                                streams[r.id].algorithm);
      r.fitevals += sel.run.fitevals;
      result.rounds.push_back({round++, r.id, tick,
                               sel.run.initial_population_hash,
                               sel.best.fitness, sel.best.gain,
                               std::move(sel.run.history)});
      out = TargetSelection{sel.targets, sel.best.fitness, sel.best.gain};
    } catch (const NoFeasibleTarget&) {
      out.reset();
    }
    r.computation_ms +=
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return out;
  };
  nav.plan = [&](const RobotState& r,
                 std::span<const Cell> avoid) -> std::optional<Path> {
    if (r.current_targets.empty()) return std::nullopt;
    const bool own_occupied = shared.state(r.cell) == CellState::Occupied;
    const OccupancyGrid* view = &shared;
    OccupancyGrid copy;
    if (own_occupied) {
      copy = planning_view(shared, r.cell, ex.sensor_model);
      view = &copy;
    }
    auto tour = plan_tour(*view, r.cell, r.current_targets, ex.planner, avoid);
    return tour.path;
  };
  nav.path_invalidated = [&](const RobotState& r) {
    for (Cell c : r.current_path) {
      if (shared.occupied_at(spec.index(c))) return true;
    }
    return false;
  };
  nav.conflict = [&](const RobotState& r, Cell next) {
    return judge_conflict(r, next, robots);
  };
  nav.actuate = [&](RobotState& r, MotionCommand cmd) {
    std::vector<Cell> others;
    for (const RobotState& q : robots) {
      if (q.id != r.id) others.push_back(q.cell);
    }
    const MotionResult res = apply_command(r, cmd, truth, others);
    if (res == MotionResult::Moved) {
      if (!r.current_targets.empty() && r.current_targets.front() == r.cell) {
        r.current_targets.erase(r.current_targets.begin());
      }
      scan(r);
    } else if (res == MotionResult::BlockedWall) {
      const Cell step = heading_step(r.heading_deg);
      const Cell dest{r.cell.i + step.i, r.cell.j + step.j};
      if (truth.truth_occupied(dest)) {
        shared.observe(dest, true, 1.0, ex.sensor_model);
      } else {
        // A diagonal clipped a corner; the offending orthogonal neighbour.
        for (Cell c : {Cell{r.cell.i + step.i, r.cell.j},
                       Cell{r.cell.i, r.cell.j + step.j}}) {
          if (truth.truth_occupied(c)) {
            shared.observe(c, true, 1.0, ex.sensor_model);
          }
        }
      }
    }
    return res;
  };

  const int max_ticks =
      cfg.max_ticks > 0 ? cfg.max_ticks : 8 * std::max(cfg.energy, 1) + 200;
  auto finished = [&] {
    if (exploration_rate(shared) >= ex.done_rate) return true;
    return std::all_of(robots.begin(), robots.end(), [](const RobotState& r) {
      return r.mode == Mode::Done;
    });
  };
  while (!finished() && tick < max_ticks) {
    ++tick;
    for (RobotState& r : robots) fsm_tick(r, nav);
    record();
  }
  if (exploration_rate(shared) >= ex.done_rate) {
    for (RobotState& r : robots) {
      r.mode = Mode::Done;
      r.current_path.clear();
    }
  }

  result.robots = robots;
  result.ticks = tick;
  result.final_rate = exploration_rate(shared);
  for (const RobotState& r : robots) {
    result.fitevals += r.fitevals;
    result.steps_total += r.steps_used();
    result.computation_ms += r.computation_ms;
  }
  result.final_belief = std::move(shared);
  result.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - wall0).count();
  return result;
}

}  // namespace swarmex

#endif  // SWARMEX_EXPLORATION_HPP
