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

#include <cmath>
#include <numbers>
#include <random>

#include "support/oracles.hpp"
#include "swarmex/planner.hpp"

namespace swarmex {
namespace {

OccupancyGrid known_free(int w, int h) {
  OccupancyGrid g(GridSpec{w, h, 0.1});
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) g.set_log_odds({i, j}, -1.0);
  }
  return g;
}

void wall(OccupancyGrid& g, Cell c) { g.set_log_odds(c, 2.0); }

TEST(Astar, OpenDiagonal) {
  const auto g = known_free(5, 5);
  const auto p = astar(g, {0, 0}, {4, 4});
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->cost, 4.0 * std::numbers::sqrt2, 1e-12);
  EXPECT_EQ(p->cells.size(), 5u);
}

TEST(Astar, GoalEqualsStart) {
  const auto g = known_free(5, 5);
  const auto p = astar(g, {2, 2}, {2, 2});
  ASSERT_TRUE(p);
  EXPECT_EQ(p->cells.size(), 1u);
  EXPECT_EQ(p->cost, 0.0);
}

TEST(Astar, QueryErrors) {
  auto g = known_free(5, 5);
  wall(g, {1, 1});
  EXPECT_THROW(astar(g, {1, 1}, {3, 3}), InvalidQuery);
  EXPECT_THROW(astar(g, {0, 0}, {9, 9}), InvalidQuery);
  EXPECT_FALSE(astar(g, {0, 0}, {1, 1}));
}

TEST(Astar, UnknownCellsCarryPremium) {
  OccupancyGrid g(GridSpec{6, 1, 0.1});
  const auto p = astar(g, {0, 0}, {5, 0});
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->cost, 5 * 1.2, 1e-12);
}

TEST(Astar, NoCornerCutting) {
  auto g = known_free(3, 3);
  wall(g, {1, 0});
  const auto p = astar(g, {0, 0}, {1, 1});
  ASSERT_TRUE(p);
  EXPECT_EQ(p->cells.size(), 3u);  // via (0,1)
  EXPECT_NEAR(p->cost, 2.0, 1e-12);
}

TEST(Astar, ExtraBlockedCellsAreAvoided) {
  const auto g = known_free(5, 1);
  const std::vector<Cell> block{{2, 0}};
  EXPECT_FALSE(astar(g, {0, 0}, {4, 0}, {}, block));
}

TEST(Astar, MatchesExactDijkstraOracle) {
  std::mt19937_64 rng(77);
  int compared = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_belief(20, 20, 0.3, rng);
    const auto free = oracle::free_cells(g);
    const Cell s = free[rng() % free.size()];
    const Cell t = free[rng() % free.size()];
    const auto expect = oracle::shortest_cost(g, s, t);
    const auto got = astar(g, s, t);
    ASSERT_EQ(expect.has_value(), got.has_value()) << "trial " << trial;
    if (!got) continue;
    ++compared;
    EXPECT_EQ(got->cells.front(), s);
    EXPECT_EQ(got->cells.back(), t);
    const auto walked = oracle::path_cost(g, got->cells);
    ASSERT_TRUE(walked) << "returned path has an illegal step";
    EXPECT_EQ(*walked, *expect) << "trial " << trial;
    EXPECT_NEAR(got->cost, expect->value(), 1e-9);
  }
  EXPECT_GT(compared, 5);
}

TEST(Astar, OctileHeuristicIsAdmissible) {
  std::mt19937_64 rng(5);
  const auto g = oracle::random_belief(16, 16, 0.2, rng);
  const auto free = oracle::free_cells(g);
  for (int n = 0; n < 40; ++n) {
    const Cell a = free[rng() % free.size()];
    const Cell b = free[rng() % free.size()];
    if (auto c = oracle::shortest_cost(g, a, b)) {
      EXPECT_LE(octile_distance(a, b), c->value() + 1e-12);
    }
  }
}

TEST(ShortestPathTree, AgreesWithAstarEverywhere) {
  std::mt19937_64 rng(11);
  const auto g = oracle::random_belief(20, 20, 0.25, rng);
  const auto free = oracle::free_cells(g);
  const Cell src = free.front();
  const ShortestPathTree tree(g, src);
  EXPECT_EQ(tree.source(), src);
  for (Cell c : free) {
    const auto a = astar(g, src, c);
    ASSERT_EQ(tree.reachable(c), a.has_value());
    if (!a) continue;
    EXPECT_NEAR(tree.cost_to(c), a->cost, 1e-9);
    const auto p = tree.path_to(c);
    ASSERT_TRUE(p);
    EXPECT_NEAR(oracle::path_cost(g, p->cells)->value(), a->cost, 1e-9);
  }
}

TEST(PlanTour, SingleTargetIsAstar) {
  const auto g = known_free(8, 8);
  const std::vector<Cell> t{{6, 3}};
  const auto tour = plan_tour(g, {1, 1}, t);
  const auto leg = astar(g, {1, 1}, {6, 3});
  ASSERT_TRUE(tour);
  EXPECT_EQ(tour.path->cells, leg->cells);
  EXPECT_DOUBLE_EQ(tour.path->cost, leg->cost);
}

TEST(PlanTour, CollinearLegsAdd) {
  const auto g = known_free(10, 3);
  const std::vector<Cell> t{{4, 1}, {8, 1}};
  const auto tour = plan_tour(g, {0, 1}, t);
  ASSERT_TRUE(tour);
  EXPECT_NEAR(tour.path->cost, 8.0, 1e-12);
  EXPECT_EQ(tour.path->cells.size(), 9u);
}

TEST(PlanTour, ReportsFailingLeg) {
  auto g = known_free(9, 5);
  // Box in (7, 2).
  for (int j = 1; j <= 3; ++j) {
    for (int i = 6; i <= 8; ++i) {
      if (!(i == 7 && j == 2)) wall(g, {i, j});
    }
  }
  wall(g, {7, 4});
  wall(g, {7, 0});
  const std::vector<Cell> t{{3, 2}, {7, 2}};
  ASSERT_FALSE(oracle::shortest_cost(g, {3, 2}, {7, 2}));
  const auto tour = plan_tour(g, {0, 2}, t);
  EXPECT_FALSE(tour);
  EXPECT_EQ(tour.failed_leg, 2);
  EXPECT_THROW(plan_tour(g, {0, 2}, std::vector<Cell>{}), InvalidQuery);
}

TEST(PathEnergy, CountsMovesAndTurns) {
  Path east;
  east.cells = {{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  EXPECT_EQ(path_energy(east, 90), 3);
  EXPECT_EQ(path_energy(east, 0), 5);
  Path single;
  single.cells = {{2, 2}};
  EXPECT_EQ(path_energy(single, 0), 0);
  Path bent;
  bent.cells = {{0, 0}, {0, 1}, {1, 2}};
  EXPECT_EQ(path_energy(bent, 0), 3);
  EXPECT_EQ(path_energy(bent, 180), 7);
  Path broken;
  broken.cells = {{0, 0}, {2, 0}};
  EXPECT_THROW(path_energy(broken, 0), InvalidQuery);
}

LidarConfig off_lattice_lidar() {
  LidarConfig l;
  l.fov_deg = 179.9;
  l.noise_std_fraction = 0.0;
  return l;
}

TEST(ObservationGain, MatchesBruteForceOnRandomBeliefs) {
  std::mt19937_64 rng(99);
  const LidarConfig lidar = off_lattice_lidar();
  for (int trial = 0; trial < 6; ++trial) {
    const auto g = oracle::random_belief(60, 60, 0.04, rng);
    const auto free = oracle::free_cells(g);
    const Cell s = free[rng() % free.size()];
    const Cell t = free[rng() % free.size()];
    const auto p = astar(g, s, t);
    if (!p) continue;
    const int h = static_cast<int>(rng() % 8) * 45;
    const ObservationGainEstimator memo(g, lidar, true);
    const std::size_t expect = oracle::sweep_gain(g, p->cells, h, lidar);
    EXPECT_EQ(memo.estimate(p->cells, h), expect) << "trial " << trial;
    EXPECT_EQ(estimate_observation_gain(g, *p, lidar, h), expect);
    EXPECT_LE(expect, count_unknown(g));
  }
}

TEST(ObservationGain, SingleScanCoversHalfAnnulus) {
  OccupancyGrid g(GridSpec{120, 120, 0.1});
  const LidarConfig lidar = off_lattice_lidar();
  const std::vector<Cell> one{{60, 60}};
  const ObservationGainEstimator est(g, lidar);
  const std::size_t gain = est.estimate(one, 0);
  EXPECT_EQ(gain, oracle::sweep_gain(g, one, 0, lidar));
  const double half_annulus = std::numbers::pi * (40.0 * 40.0 - 3.0 * 3.0) / 2.0;
  EXPECT_NEAR(static_cast<double>(gain), half_annulus, 0.1 * half_annulus);
}

TEST(ObservationGain, ExploredSurroundingsGiveZero) {
  const auto g = known_free(100, 100);
  Path p;
  p.cells = {{50, 50}, {51, 50}, {52, 51}};
  EXPECT_EQ(estimate_observation_gain(g, p, LidarConfig{}), 0u);
}

TEST(ObservationGain, DuplicateCellsDoNotChangeTheCount) {
  OccupancyGrid g(GridSpec{80, 80, 0.1});
  const ObservationGainEstimator est(g, LidarConfig{});
  const std::vector<Cell> plain{{20, 20}, {21, 20}, {22, 21}};
  const std::vector<Cell> dup{{20, 20}, {21, 20}, {21, 20}, {22, 21}, {22, 21}};
  EXPECT_EQ(est.estimate(plain, 90), est.estimate(dup, 90));
}

TEST(ObservationGain, OccupiedCellsBlockSight) {
  OccupancyGrid open(GridSpec{60, 60, 0.1});
  OccupancyGrid walled(GridSpec{60, 60, 0.1});
  for (int i = 0; i < 60; ++i) walled.set_log_odds({i, 35}, 2.0);
  const std::vector<Cell> one{{30, 30}};
  const LidarConfig lidar;
  EXPECT_LT(ObservationGainEstimator(walled, lidar).estimate(one, 0),
            ObservationGainEstimator(open, lidar).estimate(one, 0));
}

}  // namespace
}  // namespace swarmex
