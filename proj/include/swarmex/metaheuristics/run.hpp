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

#ifndef SWARMEX_METAHEURISTICS_RUN_HPP
#define SWARMEX_METAHEURISTICS_RUN_HPP

#include <chrono>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "swarmex/metaheuristics/algorithm.hpp"
#include "swarmex/metaheuristics/population.hpp"

namespace swarmex::mh {

struct RunConfig {
  int population_size = 20;
  int max_generations = 30;
  int early_stop_patience = 10;
  std::uint64_t seed = 25;
  // Used instead of a random draw when present; lets several algorithms
  // start from the same members.
  std::optional<std::vector<std::vector<double>>> initial_population;
  unsigned threads = 1;
  std::function<bool()> stop_requested;
};

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  std::uint64_t fitevals = 0;  // cumulative
  double elapsed_ms = 0.0;     // wall time of this generation
};

struct RunResult {
  Candidate best;
  std::vector<GenerationRecord> history;  // entry 0 is the initial population
  std::uint64_t fitevals = 0;
  std::uint64_t initial_population_hash = 0;
  int generations = 0;
};

/// Evaluates the initial population, then iterates generations until
/// max_generations, `early_stop_patience` consecutive generations without a
/// strict best-ever improvement, or an external stop request.
inline RunResult run(Algorithm& algorithm, const Objective& objective,
                     const Bounds& bounds, const RunConfig& config, Rng& rng) {
  using Clock = std::chrono::steady_clock;
  Population pop =
      config.initial_population
          ? population_from(bounds, *config.initial_population)
          : random_population(bounds,
                              static_cast<std::size_t>(config.population_size),
                              rng);
  RunResult result;
  result.initial_population_hash = population_hash(pop);
  Evaluator evaluator(objective, config.threads);

  auto t0 = Clock::now();
  evaluate(pop, evaluator);
  algorithm.initialize(pop, evaluator, rng, {0, config.max_generations});
  auto ms_since = [](Clock::time_point from) {
    return std::chrono::duration<double, std::milli>(Clock::now() - from)
        .count();
  };
  result.history.push_back({0, pop.best_ever.value(), pop.fitevals, ms_since(t0)});

  int stale = 0;
  for (int g = 1; g <= config.max_generations; ++g) {
    if (config.stop_requested && config.stop_requested()) break;
    const double before = pop.best_ever.value();
    auto tg = Clock::now();
    algorithm.step(pop, evaluator, rng, {g - 1, config.max_generations});
    pop.generation = g;
    result.history.push_back(
        {g, pop.best_ever.value(), pop.fitevals, ms_since(tg)});
    stale = pop.best_ever.value() < before ? 0 : stale + 1;
    if (config.early_stop_patience > 0 && stale >= config.early_stop_patience) {
      break;
    }
  }
  result.best = pop.best_ever;
  result.fitevals = pop.fitevals;
  result.generations = pop.generation;
  return result;
}

inline RunResult run(Algorithm& algorithm, const Objective& objective,
                     const Bounds& bounds, const RunConfig& config) {
  Rng rng = make_stream(config.seed, 0);
  return run(algorithm, objective, bounds, config, rng);
}

inline void write_history_csv(const std::vector<GenerationRecord>& history,
                              std::ostream& out, bool header = true) {
  if (header) out << "generation,best_fitness,fitevals,elapsed_ms\n";
  for (const auto& r : history) {
    out << r.generation << ',' << r.best_fitness << ',' << r.fitevals << ','
        << r.elapsed_ms << '\n';
  }
}

}  // namespace swarmex::mh

#endif  // SWARMEX_METAHEURISTICS_RUN_HPP
