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

// Minimizes a 5-d sphere with every registered algorithm from the same
// initial population, then runs one short exploration mission.

#include <cstdio>
#include <numeric>

#include "swarmex/exploration.hpp"
#include "swarmex/metaheuristics/registry.hpp"
#include "swarmex/metaheuristics/run.hpp"

int main() {
  using namespace swarmex;
  const mh::Objective sphere = [](std::span<const double> x) {
    return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
  };
  const auto bounds = mh::Bounds::uniform(5, -5.0, 5.0);

  Rng init = make_stream(25, 99);
  std::vector<std::vector<double>> shared;
  for (int n = 0; n < 20; ++n) {
    std::vector<double> g(5);
    for (double& v : g) v = -5.0 + 10.0 * uniform01(init);
    shared.push_back(g);
  }

  std::printf("%-8s %14s %10s %12s\n", "algo", "best", "fitevals", "generations");
  for (const auto& name : mh::algorithm_names()) {
    auto algo = mh::make_algorithm(name, 20);
    mh::RunConfig rc;
    rc.max_generations = 200;
    rc.early_stop_patience = 0;
    rc.initial_population = shared;
    const auto res = mh::run(*algo, sphere, bounds, rc);
    std::printf("%-8s %14.6g %10llu %12d\n", name.c_str(), res.best.value(),
                static_cast<unsigned long long>(res.fitevals), res.generations);
  }

  const OccupancyGrid truth = load_map_at_resolution(
      std::string(SWARMEX_MAPS_DIR) + "/empty.txt", 0.1, 0.2);
  MissionConfig mission;
  mission.energy = 1500;
  const auto result = run_mission(truth, mission);
  std::printf("\nxboa mission on the empty map: rate %.4f after %d ticks, "
              "%d steps\n",
              result.final_rate, result.ticks, result.steps_total);
  return 0;
}
