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

#ifndef SWARMEX_METAHEURISTICS_GA_HPP
#define SWARMEX_METAHEURISTICS_GA_HPP

#include <string>
#include <vector>

#include "swarmex/metaheuristics/algorithm.hpp"
#include "swarmex/metaheuristics/operators.hpp"

namespace swarmex::mh {

struct GaParams {
  double crossover_probability = 0.9;
  double mutation_probability = 0.02;
  double mutation_distribution_index = 20.0;
  int tournament_size = 2;

  void validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(crossover_probability) || !prob(mutation_probability)) {
      throw ConfigError("ga: probabilities must lie in [0, 1]");
    }
    if (tournament_size < 1) throw ConfigError("ga: tournament size < 1");
  }
};

// Generational GA: tournament selection, single-point crossover, bounded
// polynomial mutation, and one elite carried over when offspring regress.
class Ga : public Algorithm {
 public:
  explicit Ga(GaParams params) : params_(params) { params_.validate(); }
  std::string name() const override { return "ga"; }

  void step(Population& pop, Evaluator& eval, Rng& rng,
            const GenerationContext&) override {
    const std::size_t n = pop.size();
    const std::size_t dim = pop.dim();
    auto tournament = [&] {
      std::size_t winner = uniform_index(rng, n);
      for (int t = 1; t < params_.tournament_size; ++t) {
        const std::size_t other = uniform_index(rng, n);
        if (pop.members[other].better_than(pop.members[winner])) winner = other;
      }
      return winner;
    };
    std::vector<Candidate> offspring;
    offspring.reserve(n + 1);
    while (offspring.size() < n) {
      const std::size_t a = tournament();
      const std::size_t b = tournament();
      Candidate c1 = pop.members[a];
      Candidate c2 = pop.members[b];
      const double cross_draw = uniform01(rng);
      const std::size_t cut = dim >= 2 ? 1 + uniform_index(rng, dim - 1) : 0;
      if (cross_draw < params_.crossover_probability && dim >= 2) {
        auto [g1, g2] = crossover_single_point(c1.genes, c2.genes, cut);
        if (g1 != c1.genes) c1 = Candidate{std::move(g1), std::nullopt, false};
        if (g2 != c2.genes) c2 = Candidate{std::move(g2), std::nullopt, false};
      }
      mutate(c1, pop.bounds, rng);
      mutate(c2, pop.bounds, rng);
      offspring.push_back(std::move(c1));
      if (offspring.size() < n) offspring.push_back(std::move(c2));
    }
    std::vector<Candidate*> batch;
    for (auto& c : offspring) {
      if (!c.evaluated()) batch.push_back(&c);
    }
    evaluate_batch(pop, batch, eval);

    const Candidate& elite = pop.members[pop.best_index()];
    std::size_t best_child = 0;
    std::size_t worst_child = 0;
    for (std::size_t k = 1; k < offspring.size(); ++k) {
      if (offspring[k].better_than(offspring[best_child])) best_child = k;
      if (offspring[worst_child].better_than(offspring[k])) worst_child = k;
    }
    if (elite.better_than(offspring[best_child])) {
      offspring[worst_child] = elite;
    }
    pop.members = std::move(offspring);
  }

 private:
  void mutate(Candidate& c, const Bounds& bounds, Rng& rng) const {
    bool changed = false;
    for (std::size_t d = 0; d < c.genes.size(); ++d) {
      const double gate = uniform01(rng);
      const double u = uniform01(rng);
      if (gate < params_.mutation_probability) {
        const double x = polynomial_mutation(c.genes[d], bounds.lower[d],
                                             bounds.upper[d],
                                             params_.mutation_distribution_index,
                                             u);
        if (x != c.genes[d]) {
          c.genes[d] = x;
          changed = true;
        }
      }
    }
    if (changed) {
      c.fitness.reset();
      c.flagged = false;
    }
  }

  GaParams params_;
};

}  // namespace swarmex::mh

#endif  // SWARMEX_METAHEURISTICS_GA_HPP
