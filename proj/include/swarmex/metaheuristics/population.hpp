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

#ifndef SWARMEX_METAHEURISTICS_POPULATION_HPP
#define SWARMEX_METAHEURISTICS_POPULATION_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "swarmex/common.hpp"

namespace swarmex::mh {

// Minimization throughout: lower fitness is better.
using Objective = std::function<double(std::span<const double>)>;

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static Bounds uniform(std::size_t dim, double lo, double hi) {
    return {std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
  }
  std::size_t dim() const { return lower.size(); }
  double width(std::size_t d) const { return upper[d] - lower[d]; }
  void clamp(std::vector<double>& genes) const {
    for (std::size_t d = 0; d < genes.size(); ++d) {
      genes[d] = std::clamp(genes[d], lower[d], upper[d]);
    }
  }
  bool contains(std::span<const double> genes) const {
    for (std::size_t d = 0; d < genes.size(); ++d) {
      if (genes[d] < lower[d] || genes[d] > upper[d]) return false;
    }
    return true;
  }
};

struct Candidate {
  std::vector<double> genes;
  std::optional<double> fitness;
  bool flagged = false;  // objective returned a non-finite value

  bool evaluated() const { return fitness.has_value(); }
  double value() const {
    return fitness.value_or(std::numeric_limits<double>::infinity());
  }
  // Strictly better; equal fitness keeps the incumbent.
  bool better_than(const Candidate& other) const {
    return value() < other.value();
  }
};

struct Population {
  std::vector<Candidate> members;
  Candidate best_ever;
  Bounds bounds;
  int generation = 0;
  std::uint64_t fitevals = 0;

  std::size_t size() const { return members.size(); }
  std::size_t dim() const { return bounds.dim(); }

  void consider(const Candidate& c) {
    if (!c.evaluated()) return;
    if (!best_ever.evaluated() || c.better_than(best_ever)) best_ever = c;
  }
  std::size_t best_index() const {
    std::size_t best = 0;
    for (std::size_t n = 1; n < members.size(); ++n) {
      if (members[n].better_than(members[best])) best = n;
    }
    return best;
  }
  std::size_t worst_index() const {
    std::size_t worst = 0;
    for (std::size_t n = 1; n < members.size(); ++n) {
      if (members[worst].better_than(members[n])) worst = n;
    }
    return worst;
  }
  double min_fitness() const {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& m : members) lo = std::min(lo, m.value());
    return lo;
  }
};

inline Population random_population(const Bounds& bounds, std::size_t n,
                                    Rng& rng) {
  Population pop;
  pop.bounds = bounds;
  pop.members.resize(n);
  for (auto& m : pop.members) {
    m.genes.resize(bounds.dim());
    for (std::size_t d = 0; d < bounds.dim(); ++d) {
      m.genes[d] = std::uniform_real_distribution<double>(bounds.lower[d],
                                                          bounds.upper[d])(rng);
    }
  }
  return pop;
}

inline Population population_from(const Bounds& bounds,
                                  const std::vector<std::vector<double>>& genes) {
  Population pop;
  pop.bounds = bounds;
  for (const auto& g : genes) {
    if (g.size() != bounds.dim()) {
      throw ConfigError("initial population gene length mismatch");
    }
    Candidate c;
    c.genes = g;
    bounds.clamp(c.genes);
    pop.members.push_back(std::move(c));
  }
  return pop;
}

inline std::uint64_t population_hash(const Population& pop) {
  std::vector<double> flat;
  for (const auto& m : pop.members) {
    flat.insert(flat.end(), m.genes.begin(), m.genes.end());
  }
  return fnv1a(flat);
}

// Runs fn(0..n-1) across up to `threads` workers; fn must not share mutable
// state between indices.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) fn(k);
    });
  }
}

/// Counting wrapper around an objective. Batches may fan out over threads;
/// bookkeeping happens afterwards in member order, so results match the
/// sequential schedule exactly.
class Evaluator {
 public:
  explicit Evaluator(Objective objective, unsigned threads = 1)
      : objective_(std::move(objective)), threads_(threads) {}

  std::uint64_t count() const { return count_; }
  unsigned threads() const { return threads_; }

  void evaluate(std::span<Candidate* const> batch) {
    std::vector<double> values(batch.size());
    parallel_for(batch.size(), threads_, [&](std::size_t k) {
      values[k] = objective_(batch[k]->genes);
    });
    for (std::size_t k = 0; k < batch.size(); ++k) {
      Candidate& c = *batch[k];
      if (std::isfinite(values[k])) {
        c.fitness = values[k];
        c.flagged = false;
      } else {
        c.fitness = std::numeric_limits<double>::infinity();
        c.flagged = true;
      }
    }
    count_ += batch.size();
  }

 private:
  Objective objective_;
  unsigned threads_;
  std::uint64_t count_ = 0;
};

// Evaluates the given candidates, charges the population counter and
// refreshes best_ever.
inline void evaluate_batch(Population& pop, std::span<Candidate* const> batch,
                           Evaluator& evaluator) {
  evaluator.evaluate(batch);
  pop.fitevals += batch.size();
  for (Candidate* c : batch) pop.consider(*c);
}

inline void evaluate(Population& pop, Evaluator& evaluator) {
  std::vector<Candidate*> pending;
  for (auto& m : pop.members) {
    if (!m.evaluated()) pending.push_back(&m);
  }
  evaluate_batch(pop, pending, evaluator);
  for (const auto& m : pop.members) pop.consider(m);
}

}  // namespace swarmex::mh

#endif  // SWARMEX_METAHEURISTICS_POPULATION_HPP
