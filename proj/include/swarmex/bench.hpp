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

#ifndef SWARMEX_BENCH_HPP
#define SWARMEX_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "swarmex/exploration.hpp"
#include "swarmex/grid_map.hpp"
#include "swarmex/metaheuristics/registry.hpp"

namespace swarmex::bench {

namespace fs = std::filesystem;
using nlohmann::json;

struct ExperimentConfig {
  std::string map = "maps/empty.txt";
  double map_cell_size = 0.1;  // resolution of the map file
  double cell_size = 0.1;      // simulation resolution
  int robots = 1;
  double start_x = 1.0;
  double start_y = 1.0;
  double start_heading = 0.0;
  int energy = 3000;
  std::string algo = "xboa";
  std::map<std::string, double> params;
  int pop_size = 20;
  int max_generations = 30;
  int patience = 10;
  int k_targets = 1;
  std::uint64_t seed = 25;
  int reps = 10;
  std::string out = "results";
  int parallel = 1;
  int eval_threads = 1;
  int max_ticks = 0;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

inline void validate(const ExperimentConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(c.map_cell_size, "map_cell_size");
  positive(c.cell_size, "cell_size");
  positive(c.robots, "robots");
  positive(c.pop_size, "pop_size");
  positive(c.max_generations, "max_generations");
  positive(c.k_targets, "k_targets");
  positive(c.reps, "reps");
  positive(c.parallel, "parallel");
  positive(c.eval_threads, "eval_threads");
  if (c.energy < 0) throw ConfigError("energy must be non-negative");
  if (c.patience < 0) throw ConfigError("patience must be non-negative");
  if (c.max_ticks < 0) throw ConfigError("max_ticks must be non-negative");
  if (!mh::is_registered(c.algo)) {
    throw ConfigError("unknown algorithm '" + c.algo + "'");
  }
}

inline json to_json(const ExperimentConfig& c) {
  return json{{"map", c.map},
              {"map_cell_size", c.map_cell_size},
              {"cell_size", c.cell_size},
              {"robots", c.robots},
              {"start_x", c.start_x},
              {"start_y", c.start_y},
              {"start_heading", c.start_heading},
              {"energy", c.energy},
              {"algo", c.algo},
              {"params", c.params},
              {"pop_size", c.pop_size},
              {"max_generations", c.max_generations},
              {"patience", c.patience},
              {"k_targets", c.k_targets},
              {"seed", c.seed},
              {"reps", c.reps},
              {"out", c.out},
              {"parallel", c.parallel},
              {"eval_threads", c.eval_threads},
              {"max_ticks", c.max_ticks}};
}

/// Overlays the keys present in `j` onto `c`; unknown keys are rejected.
inline void merge_json(ExperimentConfig& c, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "map") c.map = value.get<std::string>();
      else if (key == "map_cell_size") c.map_cell_size = value.get<double>();
      else if (key == "cell_size") c.cell_size = value.get<double>();
      else if (key == "robots") c.robots = value.get<int>();
      else if (key == "start_x") c.start_x = value.get<double>();
      else if (key == "start_y") c.start_y = value.get<double>();
      else if (key == "start_heading") c.start_heading = value.get<double>();
      else if (key == "energy") c.energy = value.get<int>();
      else if (key == "algo") c.algo = value.get<std::string>();
      else if (key == "params") c.params = value.get<std::map<std::string, double>>();
      else if (key == "pop_size") c.pop_size = value.get<int>();
      else if (key == "max_generations") c.max_generations = value.get<int>();
      else if (key == "patience") c.patience = value.get<int>();
      else if (key == "k_targets") c.k_targets = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "reps") c.reps = value.get<int>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "parallel") c.parallel = value.get<int>();
      else if (key == "eval_threads") c.eval_threads = value.get<int>();
      else if (key == "max_ticks") c.max_ticks = value.get<int>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

inline ExperimentConfig from_json(const json& j) {
  ExperimentConfig c;
  merge_json(c, j);
  return c;
}

inline json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

/// Resolves a map path, falling back to the bundled maps directory.
inline fs::path resolve_map(const std::string& map) {
  fs::path p(map);
  if (fs::exists(p)) return p;
#ifdef SWARMEX_MAPS_DIR
  fs::path bundled = fs::path(SWARMEX_MAPS_DIR) / p.filename();
  if (fs::exists(bundled)) return bundled;
#endif
  throw IoError("map not found: " + map);
}

inline OccupancyGrid load_truth(const ExperimentConfig& c) {
  return load_map_at_resolution(resolve_map(c.map), c.map_cell_size,
                                c.cell_size);
}

inline MissionConfig mission_config(const ExperimentConfig& c, int rep) {
  MissionConfig m;
  m.robots = c.robots;
  m.starts = {Pose{c.start_x, c.start_y, c.start_heading}};
  m.energy = c.energy;
  m.selection.algorithm = c.algo;
  m.selection.params = c.params;
  m.selection.population_size = c.pop_size;
  m.selection.max_generations = c.max_generations;
  m.selection.early_stop_patience = c.patience;
  m.selection.threads = static_cast<unsigned>(c.eval_threads);
  m.exploration.k_targets = c.k_targets;
  m.seed = c.seed + static_cast<std::uint64_t>(rep);
  m.max_ticks = c.max_ticks;
  return m;
}

// ---------------------------------------------------------------------------
// Records

struct RepetitionRecord {
  int rep = 0;
  std::uint64_t seed = 0;
  double final_rate = 0.0;
  int ticks = 0;
  int steps = 0;             // summed over robots
  int max_robot_steps = 0;
  std::uint64_t fitevals = 0;
  double computation_ms = 0.0;
  double wall_ms = 0.0;
  std::uint64_t initial_population_hash = 0;
  MissionResult mission;
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::string map_name;
  std::vector<RepetitionRecord> reps;

  double avg_rate() const {
    double s = 0.0;
    for (const auto& r : reps) s += r.final_rate;
    return reps.empty() ? 0.0 : s / static_cast<double>(reps.size());
  }
  double avg_computation_ms() const {
    double s = 0.0;
    for (const auto& r : reps) s += r.computation_ms;
    return reps.empty() ? 0.0 : s / static_cast<double>(reps.size());
  }
  double avg_fitevals() const {
    double s = 0.0;
    for (const auto& r : reps) s += static_cast<double>(r.fitevals);
    return reps.empty() ? 0.0 : s / static_cast<double>(reps.size());
  }
};

inline RepetitionRecord summarize(int rep, std::uint64_t seed,
                                  MissionResult mission) {
  RepetitionRecord r;
  r.rep = rep;
  r.seed = seed;
  r.final_rate = mission.final_rate;
  r.ticks = mission.ticks;
  r.steps = mission.steps_total;
  for (const auto& robot : mission.robots) {
    r.max_robot_steps = std::max(r.max_robot_steps, robot.steps_used());
  }
  r.fitevals = mission.fitevals;
  r.computation_ms = mission.computation_ms;
  r.wall_ms = mission.wall_ms;
  if (!mission.rounds.empty()) {
    r.initial_population_hash = mission.rounds.front().initial_population_hash;
  }
  r.mission = std::move(mission);
  return r;
}

// ---------------------------------------------------------------------------
// Writers

inline std::ofstream open_out(const fs::path& path,
                              std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(12);
  return out;
}

inline void write_series_csv(const MissionResult& m, std::ostream& out) {
  out << "tick,robot_id,steps_used,exploration_rate,fitevals_cum\n";
  for (const auto& t : m.series) {
    out << t.tick << ',' << t.robot_id << ',' << t.steps_used << ','
        << t.exploration_rate << ',' << t.fitevals_cum << '\n';
  }
}

inline void write_trajectory_csv(const MissionResult& m, const GridSpec& spec,
                                 std::ostream& out) {
  out << "tick,id,x,y,heading,energy,mode\n";
  for (const auto& t : m.series) {
    out << t.tick << ',' << t.robot_id << ',' << spec.center_x(t.cell.i) << ','
        << spec.center_y(t.cell.j) << ',' << t.heading_deg << ',' << t.energy
        << ',' << to_string(t.mode) << '\n';
  }
}

inline void write_timing_csv(const MissionResult& m, std::ostream& out) {
  out << "tick,robot_id,computation_ms_cum\n";
  for (const auto& t : m.series) {
    out << t.tick << ',' << t.robot_id << ',' << t.computation_ms_cum << '\n';
  }
}

inline void write_generations_csv(const MissionResult& m, std::ostream& out) {
  out << "round,robot_id,tick,generation,best_fitness,fitevals\n";
  for (const auto& r : m.rounds) {
    for (const auto& g : r.history) {
      out << r.round << ',' << r.robot_id << ',' << r.tick << ','
          << g.generation << ',' << g.best_fitness << ',' << g.fitevals << '\n';
    }
  }
}

inline json summary_json(const ExperimentRecord& rec) {
  json reps = json::array();
  double rmin = 1.0, rmax = 0.0;
  long long steps = 0;
  unsigned long long fev = 0;
  double comp = 0.0, wall = 0.0;
  for (const auto& r : rec.reps) {
    reps.push_back({{"rep", r.rep},
                    {"seed", r.seed},
                    {"final_rate", r.final_rate},
                    {"ticks", r.ticks},
                    {"steps", r.steps},
                    {"max_robot_steps", r.max_robot_steps},
                    {"fitevals", r.fitevals},
                    {"computation_ms", r.computation_ms},
                    {"wall_ms", r.wall_ms},
                    {"initial_population_hash", r.initial_population_hash}});
    rmin = std::min(rmin, r.final_rate);
    rmax = std::max(rmax, r.final_rate);
    steps += r.steps;
    fev += r.fitevals;
    comp += r.computation_ms;
    wall += r.wall_ms;
  }
  return json{{"algorithm", rec.config.algo},
              {"map", rec.map_name},
              {"repetitions", rec.reps.size()},
              {"final_rate_avg", rec.avg_rate()},
              {"final_rate_min", rec.reps.empty() ? 0.0 : rmin},
              {"final_rate_max", rec.reps.empty() ? 0.0 : rmax},
              {"total_steps", steps},
              {"total_fitevals", fev},
              {"total_computation_ms", comp},
              {"total_wall_ms", wall},
              {"reps", reps}};
}

inline fs::path output_dir(const ExperimentConfig& c) {
  if (const char* env = std::getenv("SWARM_BENCH_OUT"); env && *env) {
    return fs::path(env);
  }
  return fs::path(c.out);
}

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

/// Runs every repetition (concurrently when `parallel` > 1) and writes the
/// per-repetition files plus summary.json into `dir`.
inline ExperimentRecord run_experiment(const ExperimentConfig& config,
                                       const fs::path& dir) {
  validate(config);
  ensure_dir(dir);
  const OccupancyGrid truth = load_truth(config);
  ExperimentRecord rec;
  rec.config = config;
  rec.map_name = fs::path(config.map).stem().string();
  rec.reps.resize(static_cast<std::size_t>(config.reps));

  auto one = [&](int rep) {
    const MissionConfig mc = mission_config(config, rep);
    MissionResult m = run_mission(truth, mc);
    const std::string tag = "_rep" + std::to_string(rep);
    {
      auto f = open_out(dir / ("series" + tag + ".csv"));
      write_series_csv(m, f);
    }
    {
      auto f = open_out(dir / ("trajectory" + tag + ".csv"));
      write_trajectory_csv(m, truth.spec(), f);
    }
    {
      auto f = open_out(dir / ("timing" + tag + ".csv"));
      write_timing_csv(m, f);
    }
    {
      auto f = open_out(dir / ("generations" + tag + ".csv"));
      write_generations_csv(m, f);
    }
    {
      auto f = open_out(dir / ("final_belief" + tag + ".pgm"), std::ios::binary);
      write_pgm(m.final_belief, f);
    }
    rec.reps[static_cast<std::size_t>(rep)] =
        summarize(rep, mc.seed, std::move(m));
  };

  const int workers = std::min(config.parallel, config.reps);
  if (workers <= 1) {
    for (int r = 0; r < config.reps; ++r) one(r);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(config.reps));
    std::atomic<int> next{0};
    {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (int r = next++; r < config.reps; r = next++) {
            try {
              one(r);
            } catch (...) {
              errors[static_cast<std::size_t>(r)] = std::current_exception();
            }
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  {
    auto f = open_out(dir / "config.json");
    f << to_json(config).dump(2) << '\n';
  }
  {
    auto f = open_out(dir / "summary.json");
    f << summary_json(rec).dump(2) << '\n';
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Plot data

struct DominanceRow {
  std::string algorithm;
  std::string map;
  double avg_rate = 0.0;
  double avg_computation_ms = 0.0;
  bool dominated = false;
  std::vector<std::string> dominated_by;
};

/// Rate is maximized, computation time minimized. Rows are compared only
/// within the same map.
inline std::vector<DominanceRow> dominance_table(std::vector<DominanceRow> rows) {
  for (auto& b : rows) {
    b.dominated = false;
    b.dominated_by.clear();
    for (const auto& a : rows) {
      if (&a == &b || a.map != b.map) continue;
      const bool no_worse = a.avg_rate >= b.avg_rate &&
                            a.avg_computation_ms <= b.avg_computation_ms;
      const bool better = a.avg_rate > b.avg_rate ||
                          a.avg_computation_ms < b.avg_computation_ms;
      if (no_worse && better) {
        b.dominated = true;
        b.dominated_by.push_back(a.algorithm);
      }
    }
  }
  return rows;
}

inline void write_dominance_csv(const std::vector<DominanceRow>& rows,
                                std::ostream& out) {
  out << "algorithm,map,avg_rate,avg_computation_ms,dominated,dominated_by\n";
  for (const auto& r : rows) {
    std::string by;
    for (const auto& n : r.dominated_by) by += (by.empty() ? "" : ";") + n;
    out << r.algorithm << ',' << r.map << ',' << r.avg_rate << ','
        << r.avg_computation_ms << ',' << (r.dominated ? 1 : 0) << ',' << by
        << '\n';
  }
}

/// Writes the tidy plot bundle for a set of experiment records into `dir`.
inline void emit_plot_data(const std::vector<ExperimentRecord>& records,
                           const fs::path& dir) {
  if (records.empty()) throw ConfigError("emit_plot_data: no records");
  ensure_dir(dir);
  auto rate = open_out(dir / "rate_vs_steps.csv");
  rate << "algorithm,map,rep,tick,steps,exploration_rate\n";
  auto fit = open_out(dir / "fitness_vs_generation.csv");
  fit << "algorithm,map,rep,round,robot_id,generation,best_fitness\n";
  auto comp = open_out(dir / "computation_time.csv");
  comp << "algorithm,map,avg_ms,min_ms,max_ms\n";
  auto fev = open_out(dir / "fitevals.csv");
  fev << "algorithm,map,avg_fitevals,min_fitevals,max_fitevals\n";
  std::vector<DominanceRow> dom;
  for (const auto& rec : records) {
    const std::string& algo = rec.config.algo;
    double cmin = 0, cmax = 0;
    std::uint64_t fmin = 0, fmax = 0;
    bool first = true;
    for (const auto& r : rec.reps) {
      // One row per tick with the largest per-robot step count at that tick.
      const auto& s = r.mission.series;
      for (std::size_t n = 0; n < s.size();) {
        const int tick = s[n].tick;
        int steps = 0;
        double er = s[n].exploration_rate;
        for (; n < s.size() && s[n].tick == tick; ++n) {
          steps = std::max(steps, s[n].steps_used);
        }
        rate << algo << ',' << rec.map_name << ',' << r.rep << ',' << tick
             << ',' << steps << ',' << er << '\n';
      }
      for (const auto& round : r.mission.rounds) {
        for (const auto& g : round.history) {
          fit << algo << ',' << rec.map_name << ',' << r.rep << ','
              << round.round << ',' << round.robot_id << ',' << g.generation
              << ',' << g.best_fitness << '\n';
        }
      }
      if (first) {
        cmin = cmax = r.computation_ms;
        fmin = fmax = r.fitevals;
        first = false;
      }
      cmin = std::min(cmin, r.computation_ms);
      cmax = std::max(cmax, r.computation_ms);
      fmin = std::min(fmin, r.fitevals);
      fmax = std::max(fmax, r.fitevals);
    }
    comp << algo << ',' << rec.map_name << ',' << rec.avg_computation_ms()
         << ',' << cmin << ',' << cmax << '\n';
    fev << algo << ',' << rec.map_name << ',' << rec.avg_fitevals() << ','
        << fmin << ',' << fmax << '\n';
    dom.push_back({algo, rec.map_name, rec.avg_rate(), rec.avg_computation_ms(),
                   false, {}});
  }
  auto d = open_out(dir / "dominance.csv");
  write_dominance_csv(dominance_table(std::move(dom)), d);
}

}  // namespace swarmex::bench

#endif  // SWARMEX_BENCH_HPP
