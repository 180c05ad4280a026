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

#ifndef SWARMEX_METAHEURISTICS_OPERATORS_HPP
#define SWARMEX_METAHEURISTICS_OPERATORS_HPP

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "swarmex/metaheuristics/population.hpp"

namespace swarmex::mh {

// Maps a minimization fitness onto a non-negative intensity: the population
// best gets 1, worse candidates decay toward 0.
inline double intensity(double fitness, double population_min_fitness) {
  if (!std::isfinite(fitness)) return 0.0;
  return 1.0 / (1.0 + (fitness - population_min_fitness));
}

// F = c * I^a
inline double fragrance(double intensity_value, double sensor_modality_c,
                        double power_exponent_a) {
  return sensor_modality_c * std::pow(intensity_value, power_exponent_a);
}

// Additive sensor-modality schedule applied once per generation.
inline double next_sensor_modality(double c, int max_generations,
                                   bool decreasing = false) {
  const double delta = 0.025 / (c * max_generations);
  return decreasing ? std::max(1e-12, c - delta) : c + delta;
}

/// child1 = p1[0..point) ++ p2[point..), child2 = p2[0..point) ++ p1[point..)
inline std::pair<std::vector<double>, std::vector<double>>
crossover_single_point(const std::vector<double>& p1,
                       const std::vector<double>& p2, std::size_t point) {
  if (p1.size() != p2.size()) {
    throw InvalidCutPoint("crossover: parents differ in length");
  }
  if (point < 1 || point + 1 > p1.size()) {
    throw InvalidCutPoint("crossover: cut point " + std::to_string(point) +
                          " outside [1, " + std::to_string(p1.size() - 1) + "]");
  }
  std::vector<double> c1(p1.begin(), p1.begin() + static_cast<long>(point));
  c1.insert(c1.end(), p2.begin() + static_cast<long>(point), p2.end());
  std::vector<double> c2(p2.begin(), p2.begin() + static_cast<long>(point));
  c2.insert(c2.end(), p1.begin() + static_cast<long>(point), p1.end());
  return {std::move(c1), std::move(c2)};
}

// Bounded polynomial mutation of one gene for a uniform draw u in [0,1).
inline double polynomial_mutation(double x, double lower, double upper,
                                  double distribution_index, double u) {
  const double span = upper - lower;
  if (!(span > 0.0)) return x;
  const double delta1 = (x - lower) / span;
  const double delta2 = (upper - x) / span;
  const double power = 1.0 / (distribution_index + 1.0);
  double deltaq = 0.0;
  if (u < 0.5) {
    const double xy = 1.0 - delta1;
    const double val =
        2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, distribution_index + 1.0);
    deltaq = std::pow(val, power) - 1.0;
  } else {
    const double xy = 1.0 - delta2;
    const double val = 2.0 * (1.0 - u) +
                       2.0 * (u - 0.5) * std::pow(xy, distribution_index + 1.0);
    deltaq = 1.0 - std::pow(val, power);
  }
  return std::clamp(x + deltaq * span, lower, upper);
}

}  // namespace swarmex::mh

#endif  // SWARMEX_METAHEURISTICS_OPERATORS_HPP
