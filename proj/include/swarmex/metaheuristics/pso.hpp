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

#ifndef SWARMEX_METAHEURISTICS_PSO_HPP
#define SWARMEX_METAHEURISTICS_PSO_HPP

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "swarmex/metaheuristics/algorithm.hpp"

namespace swarmex::mh {

struct PsoParams {
  double social_coef = 1.49445;     // c2, pull toward the neighbourhood best
  double cognitive_coef = 1.49445;  // c1, pull toward the particle's own best
  double max_velocity = 0.5;        // fraction of the domain width
  double inertia_weight = 0.7298;
  int neighbourhood_size = 4;       // ring neighbours, excluding self

  void validate() const {
    if (!(max_velocity > 0.0)) throw ConfigError("pso: max_velocity <= 0");
    if (neighbourhood_size < 0) throw ConfigError("pso: negative neighbourhood");
  }
};

/// v <- w v + c1 r1 (p_best - x) + c2 r2 (n_best - x), componentwise clamp to
/// max_velocity * width, then x <- x + v clamped to the bounds.
inline void pso_update(std::vector<double>& x, std::vector<double>& v,
                       std::span<const double> personal_best,
                       std::span<const double> neighbourhood_best,
                       std::span<const double> r1, std::span<const double> r2,
                       const PsoParams& params, const Bounds& bounds) {
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double vmax = params.max_velocity * bounds.width(d);
    double vel = params.inertia_weight * v[d] +
                 params.cognitive_coef * r1[d] * (personal_best[d] - x[d]) +
                 params.social_coef * r2[d] * (neighbourhood_best[d] - x[d]);
    vel = std::clamp(vel, -vmax, vmax);
    v[d] = vel;
    x[d] = std::clamp(x[d] + vel, bounds.lower[d], bounds.upper[d]);
  }
}

class Pso : public Algorithm {
 public:
  explicit Pso(PsoParams params) : params_(params) { params_.validate(); }
  std::string name() const override { return "pso"; }

  void initialize(Population& pop, Evaluator&, Rng& rng,
                  const GenerationContext&) override {
    velocity_.assign(pop.size(), std::vector<double>(pop.dim(), 0.0));
    for (auto& v : velocity_) {
      for (std::size_t d = 0; d < v.size(); ++d) {
        const double vmax = params_.max_velocity * pop.bounds.width(d);
        v[d] = (2.0 * uniform01(rng) - 1.0) * vmax;
      }
    }
    personal_best_ = pop.members;
  }

  void step(Population& pop, Evaluator& eval, Rng& rng,
            const GenerationContext&) override {
    const std::size_t n = pop.size();
    const std::size_t dim = pop.dim();
    if (personal_best_.size() != n) initialize(pop, eval, rng, {});
    std::vector<std::size_t> leader(n);
    for (std::size_t i = 0; i < n; ++i) leader[i] = neighbourhood_best(i);
    std::vector<double> r1(dim), r2(dim);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < dim; ++d) {
        r1[d] = uniform01(rng);
        r2[d] = uniform01(rng);
      }
      Candidate& particle = pop.members[i];
      pso_update(particle.genes, velocity_[i], personal_best_[i].genes,
                 personal_best_[leader[i]].genes, r1, r2, params_, pop.bounds);
      particle.fitness.reset();
    }
    std::vector<Candidate*> batch;
    for (auto& m : pop.members) batch.push_back(&m);
    evaluate_batch(pop, batch, eval);
    for (std::size_t i = 0; i < n; ++i) {
      if (pop.members[i].better_than(personal_best_[i])) {
        personal_best_[i] = pop.members[i];
      }
    }
  }

  const std::vector<std::vector<double>>& velocities() const {
    return velocity_;
  }

 private:
  // Best personal memory among the particle and its ring neighbours.
  std::size_t neighbourhood_best(std::size_t i) const {
    const long n = static_cast<long>(personal_best_.size());
    const long half = params_.neighbourhood_size / 2;
    std::size_t best = i;
    for (long off = -half; off <= half; ++off) {
      const auto k = static_cast<std::size_t>(
          ((static_cast<long>(i) + off) % n + n) % n);
      if (personal_best_[k].better_than(personal_best_[best])) best = k;
    }
    return best;
  }

  PsoParams params_;
  std::vector<std::vector<double>> velocity_;
  std::vector<Candidate> personal_best_;
};

}  // namespace swarmex::mh

#endif  // SWARMEX_METAHEURISTICS_PSO_HPP
