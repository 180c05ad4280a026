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

#ifndef SWARMEX_METAHEURISTICS_REGISTRY_HPP
#define SWARMEX_METAHEURISTICS_REGISTRY_HPP

#include <map>
#include <string>
#include <vector>

#include "swarmex/metaheuristics/boa.hpp"
#include "swarmex/metaheuristics/ga.hpp"
#include "swarmex/metaheuristics/pso.hpp"

namespace swarmex::mh {

/// Flat numeric overrides keyed by parameter name, e.g. {"a": 0.9}.
using ParamOverrides = std::map<std::string, double>;

struct Preset {
  std::string name;
  std::string algorithm;
  ParamOverrides params;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"boa-pop20", "boa", {{"a", 0.547}, {"c", 0.602}, {"p", 0.395}}},
      {"boa-pop5", "boa", {{"a", 0.73}, {"c", 0.577}, {"p", 0.331}}},
      {"xboa-pop20", "xboa", {{"a", 0.905}, {"c", 0.257}, {"pc", 0.593}}},
      {"xboa-pop5", "xboa", {{"a", 0.994}, {"c", 0.518}, {"pc", 0.583}}},
      {"ga-default", "ga", {{"pc", 0.11}, {"pm", 0.215}, {"eta", 76.026}}},
      {"pso-default",
       "pso",
       {{"social", 1.506},
        {"cognitive", 3.379},
        {"vmax", 0.329},
        {"inertia", 0.449}}},
      {"mboa-pop5", "mboa", {{"a", 0.61}, {"c", 0.356}, {"p", 0.762}}},
      {"aboa-pop5",
       "aboa",
       {{"a", 0.992}, {"c", 0.98}, {"p", 0.983}, {"mu", 1.356}}},
      {"saboa-pop5", "saboa", {{"p", 0.237}}},
  };
  return table;
}

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"boa",   "xboa", "mboa",
                                                 "saboa", "aboa", "ga",
                                                 "pso"};
  return names;
}

/// Every name accepted by make_algorithm: base algorithms then presets.
inline std::vector<std::string> registered_names() {
  std::vector<std::string> out = algorithm_names();
  for (const auto& p : presets()) out.push_back(p.name);
  return out;
}

inline const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

/// The preset a bare algorithm name stands for at a given population size.
inline const Preset* default_preset(const std::string& algorithm,
                                    int population_size) {
  const bool small = population_size <= 5;
  const std::vector<std::string> order =
      small ? std::vector<std::string>{algorithm + "-pop5",
                                       algorithm + "-pop20",
                                       algorithm + "-default"}
            : std::vector<std::string>{algorithm + "-pop20",
                                       algorithm + "-default",
                                       algorithm + "-pop5"};
  for (const auto& n : order) {
    if (const Preset* p = find_preset(n)) return p;
  }
  return nullptr;
}

namespace detail {

inline void apply(const ParamOverrides& ov, BoaParams& p) {
  for (const auto& [k, v] : ov) {
    if (k == "a") p.power_exponent_a = v;
    else if (k == "c") p.sensor_modality_c = v;
    else if (k == "p") p.switch_probability = v;
    else if (k == "pc") p.crossover_probability = v;
    else if (k == "mu") p.mu = v;
    else if (k == "radius") p.intensify_radius_fraction = v;
    else if (k == "probes") p.intensify_probes = static_cast<int>(v);
    else if (k == "decreasing") p.decreasing_modality = v != 0.0;
    else throw ConfigError("unknown BOA parameter '" + k + "'");
  }
}

inline void apply(const ParamOverrides& ov, GaParams& p) {
  for (const auto& [k, v] : ov) {
    if (k == "pc") p.crossover_probability = v;
    else if (k == "pm") p.mutation_probability = v;
    else if (k == "eta") p.mutation_distribution_index = v;
    else if (k == "tournament") p.tournament_size = static_cast<int>(v);
    else throw ConfigError("unknown GA parameter '" + k + "'");
  }
}

inline void apply(const ParamOverrides& ov, PsoParams& p) {
  for (const auto& [k, v] : ov) {
    if (k == "social") p.social_coef = v;
    else if (k == "cognitive") p.cognitive_coef = v;
    else if (k == "vmax") p.max_velocity = v;
    else if (k == "inertia") p.inertia_weight = v;
    else if (k == "neighbourhood") p.neighbourhood_size = static_cast<int>(v);
    else throw ConfigError("unknown PSO parameter '" + k + "'");
  }
}

}  // namespace detail

/// Builds an algorithm from a base name or preset name. A base name picks up
/// its preset for the population size; `overrides` are applied last.
inline AlgorithmPtr make_algorithm(const std::string& name,
                                   int population_size = 20,
                                   const ParamOverrides& overrides = {}) {
  std::string algo = name;
  ParamOverrides params;
  if (const Preset* p = find_preset(name)) {
    algo = p->algorithm;
    params = p->params;
  } else if (const Preset* dp = default_preset(name, population_size)) {
    params = dp->params;
  }
  for (const auto& [k, v] : overrides) params[k] = v;

  if (algo == "boa" || algo == "xboa" || algo == "mboa" || algo == "saboa" ||
      algo == "aboa") {
    BoaParams bp;
    detail::apply(params, bp);
    if (algo == "boa") return std::make_unique<Boa>(bp);
    if (algo == "xboa") return std::make_unique<XBoa>(bp);
    if (algo == "mboa") return std::make_unique<MBoa>(bp);
    if (algo == "saboa") return std::make_unique<SaBoa>(bp);
    return std::make_unique<ABoa>(bp);
  }
  if (algo == "ga") {
    GaParams gp;
    detail::apply(params, gp);
    return std::make_unique<Ga>(gp);
  }
  if (algo == "pso") {
    PsoParams pp;
    detail::apply(params, pp);
    return std::make_unique<Pso>(pp);
  }
  throw ConfigError("unknown algorithm '" + name + "'");
}

inline bool is_registered(const std::string& name) {
  const auto names = registered_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace swarmex::mh

#endif  // SWARMEX_METAHEURISTICS_REGISTRY_HPP
