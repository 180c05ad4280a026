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

#ifndef SWARMEX_METAHEURISTICS_ALGORITHM_HPP
#define SWARMEX_METAHEURISTICS_ALGORITHM_HPP

#include <memory>
#include <string>

#include "swarmex/metaheuristics/population.hpp"

namespace swarmex::mh {

struct GenerationContext {
  int t = 0;                // generations completed before this one
  int max_generations = 30;
};

/// Population optimizer plug-in. `initialize` runs once after the initial
/// population has been evaluated; `step` advances one generation. All
/// randomness must come from the supplied engine.
class Algorithm {
 public:
  virtual ~Algorithm() = default;
  virtual std::string name() const = 0;
  virtual void initialize(Population& /*pop*/, Evaluator& /*eval*/,
                          Rng& /*rng*/, const GenerationContext& /*ctx*/) {}
  virtual void step(Population& pop, Evaluator& eval, Rng& rng,
                    const GenerationContext& ctx) = 0;
};

using AlgorithmPtr = std::unique_ptr<Algorithm>;

}  // namespace swarmex::mh

#endif  // SWARMEX_METAHEURISTICS_ALGORITHM_HPP
