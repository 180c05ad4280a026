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

// Butterfly optimization and its variants: the original greedy BOA, the
// crossover variant xBOA, and the mBOA / SABOA / ABOA modifications.
//
// All variants generate every trial of a generation from the state at the
// start of that generation, with random draws taken in member order, then
// evaluate the trials as one batch.

#ifndef SWARMEX_METAHEURISTICS_BOA_HPP
#define SWARMEX_METAHEURISTICS_BOA_HPP

#include <cmath>
#include <string>
#include <vector>

#include "swarmex/metaheuristics/algorithm.hpp"
#include "swarmex/metaheuristics/operators.hpp"
#include "swarmex/metaheuristics/population.hpp"

namespace swarmex::mh {

struct BoaParams {
  double sensor_modality_c = 0.01;
  double power_exponent_a = 0.1;
  double switch_probability = 0.8;
  double crossover_probability = 0.6;
  double mu = 1.0;
  // Subtract instead of add in the per-generation modality update.
  bool decreasing_modality = false;
  // mBOA intensification around the best-so-far.
  double intensify_radius_fraction = 0.05;
  int intensify_probes = 5;
  double saboa_epsilon = 1e-12;

  void validate() const {
    if (!(sensor_modality_c > 0.0)) throw ConfigError("boa: c must be > 0");
    if (!(power_exponent_a > 0.0 && power_exponent_a <= 1.0)) {
      throw ConfigError("boa: a must lie in (0, 1]");
    }
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(switch_probability) || !prob(crossover_probability)) {
      throw ConfigError("boa: probabilities must lie in [0, 1]");
    }
  }
};

// x + (r^2 * g - x) * f
inline std::vector<double> boa_global_move(const std::vector<double>& x,
                                           const std::vector<double>& best,
                                           double r, double frag) {
  std::vector<double> out(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) {
    out[d] = x[d] + (r * r * best[d] - x[d]) * frag;
  }
  return out;
}

// x + (r^2 * x_j - x_k) * f
inline std::vector<double> boa_local_move(const std::vector<double>& x,
                                          const std::vector<double>& xj,
                                          const std::vector<double>& xk,
                                          double r, double frag) {
  std::vector<double> out(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) {
    out[d] = x[d] + (r * r * xj[d] - xk[d]) * frag;
  }
  return out;
}

class Boa : public Algorithm {
 public:
  explicit Boa(BoaParams params)
      : params_(params), c_(params.sensor_modality_c) {
    params_.validate();
  }

  std::string name() const override { return "boa"; }
  const BoaParams& params() const { return params_; }
  double sensor_modality() const { return c_; }

  void initialize(Population&, Evaluator&, Rng&,
                  const GenerationContext&) override {
    c_ = params_.sensor_modality_c;
  }

  void step(Population& pop, Evaluator& eval, Rng& rng,
            const GenerationContext& ctx) override {
    begin_generation(ctx);
    greedy_search(pop, eval, rng);
    end_generation(ctx);
  }

  // Per-member fragrance from the current fitness values.
  virtual std::vector<double> fragrances(const Population& pop) const {
    const double fmin = pop.min_fitness();
    std::vector<double> out(pop.size());
    for (std::size_t n = 0; n < pop.size(); ++n) {
      out[n] = fragrance(intensity(pop.members[n].value(), fmin), c_,
                         params_.power_exponent_a);
    }
    return out;
  }

 protected:
  virtual void begin_generation(const GenerationContext&) {}
  virtual void end_generation(const GenerationContext& ctx) {
    c_ = next_sensor_modality(c_, ctx.max_generations,
                              params_.decreasing_modality);
  }

  // Switch between the global move toward the best-so-far and the local
  // random-pair move; a trial replaces its butterfly only if strictly better.
  void greedy_search(Population& pop, Evaluator& eval, Rng& rng) {
    const std::size_t n = pop.size();
    const auto frag = fragrances(pop);
    const std::vector<double> best = pop.best_ever.genes;
    std::vector<Candidate> trials(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double switch_draw = uniform01(rng);
      const double r = uniform01(rng);
      const std::size_t j = uniform_index(rng, n);
      const std::size_t k = uniform_index(rng, n);
      const auto& x = pop.members[i].genes;
      trials[i].genes =
          switch_draw < params_.switch_probability
              ? boa_global_move(x, best, r, frag[i])
              : boa_local_move(x, pop.members[j].genes, pop.members[k].genes,
                               r, frag[i]);
      pop.bounds.clamp(trials[i].genes);
    }
    std::vector<Candidate*> batch;
    for (auto& t : trials) batch.push_back(&t);
    evaluate_batch(pop, batch, eval);
    for (std::size_t i = 0; i < n; ++i) {
      if (trials[i].better_than(pop.members[i])) {
        pop.members[i] = std::move(trials[i]);
      }
    }
  }

  BoaParams params_;
  double c_;
};

/// Crossover BOA: with probability p_c a butterfly is recombined with a
/// uniformly drawn partner by single-point crossover and replaced by the
/// better of the two children; otherwise it takes the local random-pair move
/// and keeps it even when the move is worse.
class XBoa : public Boa {
 public:
  explicit XBoa(BoaParams params) : Boa(params) {}
  std::string name() const override { return "xboa"; }

  void step(Population& pop, Evaluator& eval, Rng& rng,
            const GenerationContext& ctx) override {
    const std::size_t n = pop.size();
    const std::size_t dim = pop.dim();
    const auto frag = fragrances(pop);
    struct Plan {
      bool crossover = false;
      Candidate child1, child2, moved;
    };
    std::vector<Plan> plans(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double cross_draw = uniform01(rng);
      Plan& plan = plans[i];
      plan.crossover =
          cross_draw < params_.crossover_probability && n >= 2 && dim >= 2;
      if (plan.crossover) {
        std::size_t partner = uniform_index(rng, n - 1);
        if (partner >= i) ++partner;
        const std::size_t cut = 1 + uniform_index(rng, dim - 1);
        auto [a, b] = crossover_single_point(pop.members[i].genes,
                                             pop.members[partner].genes, cut);
        plan.child1.genes = std::move(a);
        plan.child2.genes = std::move(b);
      } else {
        const double r = uniform01(rng);
        const std::size_t j = uniform_index(rng, n);
        const std::size_t k = uniform_index(rng, n);
        plan.moved.genes =
            boa_local_move(pop.members[i].genes, pop.members[j].genes,
                           pop.members[k].genes, r, frag[i]);
        pop.bounds.clamp(plan.moved.genes);
      }
    }
    std::vector<Candidate*> batch;
    for (auto& plan : plans) {
      if (plan.crossover) {
        batch.push_back(&plan.child1);
        batch.push_back(&plan.child2);
      } else {
        batch.push_back(&plan.moved);
      }
    }
    evaluate_batch(pop, batch, eval);
    for (std::size_t i = 0; i < n; ++i) {
      Plan& plan = plans[i];
      if (plan.crossover) {
        pop.members[i] = plan.child2.better_than(plan.child1)
                             ? std::move(plan.child2)
                             : std::move(plan.child1);
      } else {
        pop.members[i] = std::move(plan.moved);
      }
    }
    crossovers_ += static_cast<std::uint64_t>(
        std::count_if(plans.begin(), plans.end(),
                      [](const Plan& p) { return p.crossover; }));
    end_generation(ctx);
  }

  std::uint64_t crossover_count() const { return crossovers_; }

 private:
  std::uint64_t crossovers_ = 0;
};

/// BOA followed by an intensification pass: a few uniform probes around the
/// best-so-far inside a radius that shrinks linearly to zero over the run.
/// An improving probe replaces the worst member.
class MBoa : public Boa {
 public:
  explicit MBoa(BoaParams params) : Boa(params) {}
  std::string name() const override { return "mboa"; }

  void step(Population& pop, Evaluator& eval, Rng& rng,
            const GenerationContext& ctx) override {
    Boa::step(pop, eval, rng, ctx);
    const double shrink =
        1.0 - static_cast<double>(ctx.t) / std::max(1, ctx.max_generations);
    const double frac = params_.intensify_radius_fraction * shrink;
    if (!(frac > 0.0) || params_.intensify_probes <= 0) return;
    std::vector<Candidate> probes(
        static_cast<std::size_t>(params_.intensify_probes));
    const auto& best = pop.best_ever.genes;
    for (auto& p : probes) {
      p.genes.resize(best.size());
      for (std::size_t d = 0; d < best.size(); ++d) {
        const double radius = frac * pop.bounds.width(d);
        p.genes[d] = best[d] + (2.0 * uniform01(rng) - 1.0) * radius;
      }
      pop.bounds.clamp(p.genes);
    }
    const Candidate incumbent = pop.best_ever;
    std::vector<Candidate*> batch;
    for (auto& p : probes) batch.push_back(&p);
    evaluate_batch(pop, batch, eval);
    for (auto& p : probes) {
      if (p.better_than(incumbent)) {
        const std::size_t worst = pop.worst_index();
        if (p.better_than(pop.members[worst])) pop.members[worst] = p;
      }
    }
  }
};

/// Self-adaptive BOA: fragrance is the intensity normalized by the
/// population maximum, so there are no c/a parameters to tune.
class SaBoa : public Boa {
 public:
  explicit SaBoa(BoaParams params) : Boa(with_defaults(params)) {}
  std::string name() const override { return "saboa"; }

  std::vector<double> fragrances(const Population& pop) const override {
    const double fmin = pop.min_fitness();
    std::vector<double> inten(pop.size());
    double imax = 0.0;
    for (std::size_t n = 0; n < pop.size(); ++n) {
      inten[n] = intensity(pop.members[n].value(), fmin);
      imax = std::max(imax, inten[n]);
    }
    for (double& v : inten) v /= (imax + params_.saboa_epsilon);
    return inten;
  }

 protected:
  void end_generation(const GenerationContext&) override {}

 private:
  static BoaParams with_defaults(BoaParams p) {
    p.sensor_modality_c = 1.0;
    p.power_exponent_a = 1.0;
    return p;
  }
};

/// Adaptive BOA: the sensor modality follows c_t = c0 * (1 - (t/T)^mu)
/// instead of the additive per-generation update.
class ABoa : public Boa {
 public:
  explicit ABoa(BoaParams params) : Boa(params) {}
  std::string name() const override { return "aboa"; }

  static double modality_schedule(double c0, int t, int max_generations,
                                  double mu) {
    const double ratio =
        static_cast<double>(t) / std::max(1, max_generations);
    return c0 * (1.0 - std::pow(ratio, mu));
  }

 protected:
  void begin_generation(const GenerationContext& ctx) override {
    c_ = modality_schedule(params_.sensor_modality_c, ctx.t,
                           ctx.max_generations, params_.mu);
  }
  void end_generation(const GenerationContext&) override {}
};

}  // namespace swarmex::mh

#endif  // SWARMEX_METAHEURISTICS_BOA_HPP
