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

#ifndef SWARMEX_CLI_HPP
#define SWARMEX_CLI_HPP

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swarmex/bench.hpp"

namespace swarmex::bench {

namespace detail {

struct Flags {
  ExperimentConfig cfg;
  std::string config_file;
  std::vector<std::string> param_pairs;
};

inline void add_experiment_flags(CLI::App& cmd, Flags& f, bool single_algo,
                                 bool single_map) {
  auto& c = f.cfg;
  if (single_map) cmd.add_option("--map", c.map, "ASCII map file");
  if (single_algo) {
    cmd.add_option("--algo", c.algo, "Algorithm or preset name");
  }
  cmd.add_option("--pop-size", c.pop_size, "Population size");
  cmd.add_option("--k-targets", c.k_targets, "Targets per optimization round");
  cmd.add_option("--energy", c.energy, "Energy budget in steps per robot");
  cmd.add_option("--robots", c.robots, "Number of robots");
  cmd.add_option("--seed", c.seed, "Base seed; repetition r uses seed + r");
  cmd.add_option("--reps", c.reps, "Repetitions");
  cmd.add_option("--out", c.out, "Output directory (SWARM_BENCH_OUT overrides)");
  cmd.add_option("--parallel", c.parallel, "Concurrent repetitions");
  cmd.add_option("--cell-size", c.cell_size, "Simulation cell size in metres");
  cmd.add_option("--map-cell-size", c.map_cell_size,
                 "Cell size of the map file in metres");
  cmd.add_option("--max-generations", c.max_generations,
                 "Generations per optimization round");
  cmd.add_option("--patience", c.patience,
                 "Generations without improvement before stopping");
  cmd.add_option("--eval-threads", c.eval_threads,
                 "Threads for fitness evaluation inside a generation");
  cmd.add_option("--max-ticks", c.max_ticks, "Mission tick guard (0 = auto)");
  cmd.add_option("--param", f.param_pairs,
                 "Algorithm parameter override, key=value (repeatable)");
  cmd.add_option("--config", f.config_file,
                 "JSON config file; its keys override flags");
}

inline ExperimentConfig finalize(Flags& f) {
  for (const auto& kv : f.param_pairs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--param expects key=value, got '" + kv + "'");
    }
    try {
      f.cfg.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("--param value is not a number: '" + kv + "'");
    }
  }
  if (!f.config_file.empty()) merge_json(f.cfg, read_json_file(f.config_file));
  return f.cfg;
}

inline std::string registered_list() {
  std::string s;
  for (const auto& n : mh::registered_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

inline bool check_algorithms(const std::vector<std::string>& algos) {
  for (const auto& a : algos) {
    if (!mh::is_registered(a)) {
      std::cerr << "unknown algorithm '" << a
                << "'\nregistered algorithms: " << registered_list() << '\n';
      return false;
    }
  }
  return true;
}

inline void print_record(const ExperimentRecord& rec, std::ostream& out) {
  double rmin = 1.0, rmax = 0.0;
  for (const auto& r : rec.reps) {
    rmin = std::min(rmin, r.final_rate);
    rmax = std::max(rmax, r.final_rate);
  }
  out << rec.config.algo << " on " << rec.map_name << ": "
      << rec.reps.size() << " reps, exploration avg " << rec.avg_rate()
      << " (min " << rmin << ", max " << rmax << "), avg fitevals "
      << rec.avg_fitevals() << ", avg computation " << rec.avg_computation_ms()
      << " ms\n";
}

}  // namespace detail

/// Entry point of the `swarmex` tool. Returns the process exit code.
inline int cli_main(int argc, char** argv) {
  CLI::App app{"swarmex: multi-robot exploration simulator and benchmark"};
  app.require_subcommand(1);

  detail::Flags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment");
  detail::add_experiment_flags(*run_cmd, run_flags, true, true);

  detail::Flags bench_flags;
  std::vector<std::string> bench_algos{"xboa", "boa"};
  std::vector<std::string> bench_maps{"maps/empty.txt"};
  auto* bench_cmd =
      app.add_subcommand("benchmark", "Run an algorithm x map matrix");
  detail::add_experiment_flags(*bench_cmd, bench_flags, false, false);
  bench_cmd->add_option("--algos", bench_algos, "Algorithms")->delimiter(',');
  bench_cmd->add_option("--maps", bench_maps, "Map files")->delimiter(',');

  detail::Flags cmp_flags;
  std::vector<std::string> cmp_algos{"xboa", "boa"};
  auto* cmp_cmd = app.add_subcommand(
      "compare", "Head-to-head comparison from shared initial populations");
  detail::add_experiment_flags(*cmp_cmd, cmp_flags, false, true);
  cmp_cmd->add_option("--algos", cmp_algos, "Algorithms")->delimiter(',');

  std::string info_map;
  double info_cell = 0.1;
  auto* info_cmd = app.add_subcommand("map-info", "Print map statistics");
  info_cmd->add_option("map", info_map, "ASCII map file")->required();
  info_cmd->add_option("--map-cell-size", info_cell, "Cell size in metres");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*info_cmd) {
      const OccupancyGrid g = load_map_file(resolve_map(info_map), info_cell);
      const GridSpec& s = g.spec();
      std::cout << "map: " << info_map << '\n'
                << "dimensions: " << s.width_cells << "x" << s.height_cells
                << " cells (" << s.width_m() << " x " << s.height_m()
                << " m)\n"
                << "cell size: " << s.cell_size_m << " m\n"
                << "occupancy: " << std::fixed << std::setprecision(4)
                << interior_obstacle_ratio(g) << '\n';
      return 0;
    }

    if (*run_cmd) {
      ExperimentConfig cfg = detail::finalize(run_flags);
      if (!detail::check_algorithms({cfg.algo})) return 2;
      const fs::path dir = output_dir(cfg);
      const auto rec = run_experiment(cfg, dir);
      detail::print_record(rec, std::cout);
      std::cout << "outputs written to " << dir.string() << '\n';
      return 0;
    }

    if (*bench_cmd) {
      ExperimentConfig base = detail::finalize(bench_flags);
      if (!detail::check_algorithms(bench_algos)) return 2;
      const fs::path root = output_dir(base);
      std::vector<ExperimentRecord> records;
      for (const auto& map : bench_maps) {
        for (const auto& algo : bench_algos) {
          ExperimentConfig cfg = base;
          cfg.map = map;
          cfg.algo = algo;
          records.push_back(run_experiment(
              cfg, root / fs::path(map).stem() / algo));
          detail::print_record(records.back(), std::cout);
        }
      }
      emit_plot_data(records, root / "plots");
      std::cout << "outputs written to " << root.string() << '\n';
      return 0;
    }

    if (*cmp_cmd) {
      ExperimentConfig base = detail::finalize(cmp_flags);
      if (!detail::check_algorithms(cmp_algos)) return 2;
      const fs::path root = output_dir(base);
      std::vector<ExperimentRecord> records;
      for (const auto& algo : cmp_algos) {
        ExperimentConfig cfg = base;
        cfg.algo = algo;
        records.push_back(run_experiment(cfg, root / algo));
      }
      emit_plot_data(records, root / "plots");
      std::cout << "rep";
      for (const auto& rec : records) std::cout << ',' << rec.config.algo;
      std::cout << ",shared_initial_population\n";
      for (std::size_t r = 0; r < records.front().reps.size(); ++r) {
        std::cout << r;
        bool same = true;
        for (const auto& rec : records) {
          std::cout << ',' << rec.reps[r].final_rate;
          same = same && rec.reps[r].initial_population_hash ==
                             records.front().reps[r].initial_population_hash;
        }
        std::cout << ',' << (same ? "yes" : "no") << '\n';
      }
      for (const auto& rec : records) detail::print_record(rec, std::cout);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace swarmex::bench

#endif  // SWARMEX_CLI_HPP
