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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "support/oracles.hpp"
#include "swarmex/exploration.hpp"

namespace swarmex {
namespace {

LidarConfig off_lattice_lidar() {
  LidarConfig l;
  l.fov_deg = 179.9;
  l.noise_std_fraction = 0.0;
  return l;
}

OccupancyGrid known_room(int w, int h) {
  OccupancyGrid g(GridSpec{w, h, 0.1});
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const bool edge = i == 0 || j == 0 || i == w - 1 || j == h - 1;
      g.set_log_odds({i, j}, edge ? 2.0 : -2.0);
    }
  }
  return g;
}

OccupancyGrid empty_map_coarse() {
  return load_map_at_resolution(std::string(SWARMEX_MAPS_DIR) + "/empty.txt",
                                0.1, 0.2);
}

// ---------------------------------------------------------------- decoding

TEST(Decode, MetresToCells) {
  const OccupancyGrid g(GridSpec{40, 40, 0.1});
  const std::vector<double> genes{1.25, 3.07};
  EXPECT_EQ(decode(genes, g), (std::vector<Cell>{{12, 30}}));
  const std::vector<double> outside{-1.0, 99.0};
  EXPECT_EQ(decode(outside, g), (std::vector<Cell>{{0, 39}}));
}

TEST(Decode, SnapsOffObstacles) {
  OccupancyGrid g(GridSpec{10, 10, 0.1});
  g.set_log_odds({5, 5}, 2.0);
  const Cell one = snap_to_free(g, {5, 5});
  EXPECT_EQ(std::abs(one.i - 5) + std::abs(one.j - 5), 1);
  EXPECT_EQ(one, (Cell{5, 4}));
  for (int j = 4; j <= 6; ++j) {
    for (int i = 4; i <= 6; ++i) g.set_log_odds({i, j}, 2.0);
  }
  const Cell two = snap_to_free(g, {5, 5});
  EXPECT_EQ(std::max(std::abs(two.i - 5), std::abs(two.j - 5)), 2);
  EXPECT_EQ((two.i - 5) * (two.i - 5) + (two.j - 5) * (two.j - 5), 4);
  EXPECT_EQ(snap_to_free(g, {1, 1}), (Cell{1, 1}));
}

TEST(Decode, BoundsCoverTheMap) {
  const auto b = target_bounds(GridSpec{30, 20, 0.1}, 3);
  EXPECT_EQ(b.dim(), 6u);
  EXPECT_DOUBLE_EQ(b.upper[0], 3.0);
  EXPECT_DOUBLE_EQ(b.upper[1], 2.0);
  EXPECT_DOUBLE_EQ(b.lower[4], 0.0);
}

// ---------------------------------------------------------------- fitness

ExplorationConfig exact_config(int k = 1) {
  ExplorationConfig cfg;
  cfg.k_targets = k;
  cfg.lidar = off_lattice_lidar();
  cfg.gain_stride = 1;
  return cfg;
}

TEST(Fitness, FullyExploredMapScoresZero) {
  const auto g = known_room(20, 20);
  ExplorationObjective obj(g, {2, 2}, 0, 1, 100, exact_config());
  EXPECT_EQ(obj.unknown_count(), 0u);
  const std::vector<double> genes{1.55, 1.55};
  EXPECT_DOUBLE_EQ(obj(genes), 0.0);
}

TEST(Fitness, OwnCellTargetScoresUnknownCount) {
  OccupancyGrid g(GridSpec{30, 30, 0.1});
  ExplorationObjective obj(g, {5, 5}, 0, 1, 100, exact_config());
  const std::vector<double> genes{0.55, 0.55};
  const auto a = obj.assess(genes);
  EXPECT_TRUE(a.reachable);
  EXPECT_EQ(a.gain, 0u);
  EXPECT_DOUBLE_EQ(a.fitness, static_cast<double>(28 * 28));
}

TEST(Fitness, UnreachableAndOverBudgetArePenalized) {
  auto g = known_room(20, 20);
  for (int i = 1; i < 19; ++i) g.set_log_odds({i, 10}, 2.0);
  ExplorationObjective obj(g, {2, 2}, 0, 1, 1000, exact_config());
  const std::vector<double> across{1.25, 1.55};
  EXPECT_DOUBLE_EQ(obj(across), obj.penalty_weight());
  EXPECT_FALSE(obj.assess(across).reachable);

  ExplorationObjective poor(g, {2, 2}, 0, 1, 3, exact_config());
  const std::vector<double> far{1.55, 0.85};
  const auto a = poor.assess(far);
  EXPECT_TRUE(a.reachable);
  EXPECT_FALSE(a.feasible);
  EXPECT_GE(a.fitness, poor.penalty_weight());
}

TEST(Fitness, EqualsUnknownMinusBruteForceGain) {
  std::mt19937_64 rng(41);
  const LidarConfig lidar = off_lattice_lidar();
  for (int trial = 0; trial < 5; ++trial) {
    auto g = oracle::random_belief(50, 50, 0.03, rng);
    const Cell start{25, 25};
    g.set_log_odds(start, -2.0);
    const int k = 1 + trial % 2;
    ExplorationObjective obj(g, start, 90, k, 10000, exact_config(k));
    std::uniform_real_distribution<double> coord(0.0, 5.0);
    std::size_t unknown = 0;
    for (int j = 1; j < 49; ++j) {
      for (int i = 1; i < 49; ++i) {
        unknown += g.state({i, j}) == CellState::Unknown ? 1 : 0;
      }
    }
    EXPECT_EQ(obj.unknown_count(), unknown);
    for (int c = 0; c < 4; ++c) {
      std::vector<double> genes;
      for (int n = 0; n < 2 * k; ++n) genes.push_back(coord(rng));
      const auto a = obj.assess(genes);
      if (!a.reachable || a.tour.cells.size() < 2) continue;
      const auto& cells = a.tour.cells;
      const Cell d{cells[1].i - cells[0].i, cells[1].j - cells[0].j};
      const int heading = static_cast<int>(std::lround(
          std::atan2(d.i, d.j) * 180.0 / std::acos(-1.0) + 360.0)) % 360;
      const std::vector<Cell> after(cells.begin() + 1, cells.end());
      const std::size_t gain = oracle::sweep_gain(g, after, heading, lidar, 1);
      EXPECT_EQ(a.gain, gain) << "trial " << trial;
      EXPECT_DOUBLE_EQ(a.fitness, static_cast<double>(unknown) -
                                      static_cast<double>(gain));
    }
  }
}

TEST(Fitness, MoreGainScoresLower) {
  // West half known, east half unknown: heading into the unknown sees more.
  OccupancyGrid g(GridSpec{60, 30, 0.1});
  for (int j = 0; j < 30; ++j) {
    for (int i = 0; i < 30; ++i) g.set_log_odds({i, j}, -2.0);
  }
  ExplorationObjective obj(g, {20, 15}, 90, 1, 1000, exact_config());
  const std::vector<double> west{0.55, 1.55};
  const std::vector<double> east{3.55, 1.55};
  const auto w = obj.assess(west), e = obj.assess(east);
  ASSERT_TRUE(w.feasible && e.feasible);
  EXPECT_GT(e.gain, w.gain);
  EXPECT_LT(e.fitness, w.fitness);
}

// ---------------------------------------------------------------- selection

TEST(Selection, NoEnergyMeansNoTarget) {
  const auto g = known_room(10, 10);
  RobotState r;
  r.cell = {2, 2};
  Rng a = make_stream(1, 1), b = make_stream(1, 2);
  EXPECT_THROW(select_targets(r, g, {}, exact_config(), a, b), NoFeasibleTarget);
}

OccupancyGrid pocket_world() {
  // Known 24x24 room with an unknown 7x7 pocket in the north-east corner,
  // walled off except for a gap on its west side.
  OccupancyGrid g(GridSpec{24, 24, 0.1});
  for (int j = 0; j < 24; ++j) {
    for (int i = 0; i < 24; ++i) {
      const bool pocket = i >= 16 && i < 23 && j >= 16 && j < 23;
      const bool edge = i == 0 || j == 0 || i == 23 || j == 23;
      const bool wall = (j == 15 && i >= 15) || (i == 15 && j >= 15 && j != 19);
      if (!pocket) g.set_log_odds({i, j}, edge || wall ? 2.0 : -2.0);
    }
  }
  return g;
}

TEST(Selection, FindsExhaustiveOptimumOnSmallMap) {
  const auto g = pocket_world();
  RobotState r;
  r.cell = {3, 3};
  r.energy_steps = r.initial_energy = 200;
  const auto cfg = exact_config();
  ExplorationObjective obj(g, r.cell, 0, 1, r.energy_steps, cfg);
  double best = obj.penalty_weight();
  std::vector<double> all;
  for (int j = 0; j < 24; ++j) {
    for (int i = 0; i < 24; ++i) {
      const std::vector<double> genes{(i + 0.5) * 0.1, (j + 0.5) * 0.1};
      const double f = obj(genes);
      all.push_back(f);
      best = std::min(best, f);
    }
  }
  std::sort(all.begin(), all.end());
  SelectionConfig sel;
  sel.max_generations = 40;
  Rng a = make_stream(25, 1), b = make_stream(25, 2);
  const auto out = select_targets(r, g, sel, cfg, a, b);
  EXPECT_LT(best, static_cast<double>(obj.unknown_count()));
  // The optimizer lands in the best 2% of all cells.
  EXPECT_LE(out.best.fitness, all[all.size() / 50]);
  EXPECT_GE(out.best.fitness, best);
  EXPECT_GE(out.targets.front().i, 15);
}

TEST(Selection, SameStreamsSameTargets) {
  const auto g = pocket_world();
  RobotState r;
  r.cell = {3, 3};
  r.energy_steps = r.initial_energy = 200;
  SelectionConfig sel;
  sel.max_generations = 10;
  Rng a1 = make_stream(9, 1), b1 = make_stream(9, 2);
  Rng a2 = make_stream(9, 1), b2 = make_stream(9, 2);
  const auto x = select_targets(r, g, sel, exact_config(2), a1, b1);
  const auto y = select_targets(r, g, sel, exact_config(2), a2, b2);
  EXPECT_EQ(x.targets, y.targets);
  EXPECT_EQ(x.run.fitevals, y.run.fitevals);
  EXPECT_EQ(x.targets.size(), 2u);
}

TEST(Selection, PlanningViewFreesOwnCell) {
  OccupancyGrid g(GridSpec{5, 5, 0.1});
  g.set_log_odds({2, 2}, 3.0);
  const auto v = planning_view(g, {2, 2});
  EXPECT_EQ(v.state({2, 2}), CellState::Empty);
  EXPECT_EQ(g.state({2, 2}), CellState::Occupied);
}

// ---------------------------------------------------------------- missions

MissionConfig coarse_mission(int robots, int energy) {
  MissionConfig m;
  m.robots = robots;
  m.energy = energy;
  m.seed = 25;
  return m;
}

TEST(Mission, ZeroEnergyStopsAfterInitialScan) {
  const auto truth = empty_map_coarse();
  const auto res = run_mission(truth, coarse_mission(1, 0));
  EXPECT_EQ(res.ticks, 0);
  OccupancyGrid belief = truth.blank_belief();
  Rng sensor = make_stream(25, 3);
  const Pose p{truth.spec().center_x(5), truth.spec().center_y(5), 0.0};
  integrate_scan(belief, simulate_scan(truth, p, LidarConfig{}, sensor));
  EXPECT_DOUBLE_EQ(res.final_rate, exploration_rate(belief));
  EXPECT_GT(res.final_rate, 0.0);
  ASSERT_EQ(res.series.size(), 1u);
  EXPECT_EQ(res.series[0].mode, Mode::Done);
}

TEST(Mission, StartInsideWallIsRejected) {
  const auto truth = empty_map_coarse();
  MissionConfig m = coarse_mission(1, 10);
  m.starts = {Pose{0.1, 0.1, 0.0}};
  EXPECT_THROW(run_mission(truth, m), InvalidPose);
}

TEST(Mission, ReachesTargetOnEmptyMap) {
  const auto truth = empty_map_coarse();
  const auto res = run_mission(truth, coarse_mission(1, 1500));
  EXPECT_GE(res.final_rate, 0.99);
  double prev = 0.0;
  for (const auto& t : res.series) {
    EXPECT_GE(t.exploration_rate, prev);
    prev = t.exploration_rate;
  }
  EXPECT_LE(res.steps_total, 1500);
  EXPECT_FALSE(res.rounds.empty());
}

TEST(Mission, InvariantsHoldEveryTick) {
  const auto truth = load_map_at_resolution(
      std::string(SWARMEX_MAPS_DIR) + "/house.txt", 0.1, 0.2);
  MissionConfig m = coarse_mission(3, 150);
  m.starts = {Pose{1.0, 1.0, 0.0}};
  const auto res = run_mission(truth, m);
  std::map<int, std::vector<const TickRecord*>> by_tick;
  for (const auto& t : res.series) {
    EXPECT_FALSE(truth.truth_occupied(t.cell));
    EXPECT_EQ(t.energy + t.steps_used, 150);
    by_tick[t.tick].push_back(&t);
  }
  for (const auto& [tick, rows] : by_tick) {
    ASSERT_EQ(rows.size(), 3u);
    std::set<Cell> cells;
    for (const auto* r : rows) cells.insert(r->cell);
    EXPECT_EQ(cells.size(), 3u) << "tick " << tick;
  }
  for (const auto& r : res.robots) {
    EXPECT_EQ(r.energy_steps, r.initial_energy - (r.moves + r.turns));
    EXPECT_GE(r.energy_steps, 0);
  }
}

TEST(Mission, ReplaysIdentically) {
  const auto truth = load_map_at_resolution(
      std::string(SWARMEX_MAPS_DIR) + "/house.txt", 0.1, 0.2);
  const MissionConfig m = coarse_mission(2, 120);
  const auto a = run_mission(truth, m), b = run_mission(truth, m);
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t n = 0; n < a.series.size(); ++n) {
    EXPECT_EQ(a.series[n].cell, b.series[n].cell);
    EXPECT_EQ(a.series[n].exploration_rate, b.series[n].exploration_rate);
    EXPECT_EQ(a.series[n].fitevals_cum, b.series[n].fitevals_cum);
  }
  ASSERT_EQ(a.rounds.size(), b.rounds.size());
  for (std::size_t n = 0; n < a.rounds.size(); ++n) {
    EXPECT_EQ(a.rounds[n].initial_population_hash,
              b.rounds[n].initial_population_hash);
  }
  EXPECT_EQ(a.final_rate, b.final_rate);
}

TEST(Mission, MoreRobotsFinishSooner) {
  const auto truth = empty_map_coarse();
  const auto one = run_mission(truth, coarse_mission(1, 1500));
  const auto three = run_mission(truth, coarse_mission(3, 1500));
  ASSERT_GE(three.final_rate, 0.99);
  EXPECT_LT(three.ticks, one.ticks);
}

}  // namespace
}  // namespace swarmex
