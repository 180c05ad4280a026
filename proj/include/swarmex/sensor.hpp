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

#ifndef SWARMEX_SENSOR_HPP
#define SWARMEX_SENSOR_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "swarmex/common.hpp"
#include "swarmex/geometry.hpp"
#include "swarmex/grid_map.hpp"

namespace swarmex {

enum class NoiseMode { Multiplicative, Additive };

struct LidarConfig {
  double max_range_m = 4.0;
  double blind_range_m = 0.3;
  double fov_deg = 180.0;
  double resolution_deg = 1.0;
  double noise_std_fraction = 0.05;
  NoiseMode noise_mode = NoiseMode::Multiplicative;
  // Range-confidence trapezoid: rises over ramp_in past the blind zone, falls
  // to far_confidence over the last ramp_out before max range.
  double ramp_in_m = 0.2;
  double ramp_out_m = 0.5;
  double far_confidence = 0.5;

  int beam_count() const {
    return static_cast<int>(std::floor(fov_deg / resolution_deg + 1e-9)) + 1;
  }
  // World compass angle of beam k for a robot heading.
  double beam_angle(int k, double heading_deg) const {
    return normalize_deg(heading_deg - fov_deg / 2.0 + k * resolution_deg);
  }
  void validate() const {
    if (!(blind_range_m >= 0.0 && blind_range_m < max_range_m)) {
      throw ConfigError("lidar: need 0 <= blind_range < max_range");
    }
    if (!(resolution_deg > 0.0)) throw ConfigError("lidar: resolution <= 0");
    if (noise_std_fraction < 0.0) throw ConfigError("lidar: negative noise");
  }
};

struct TraversedCell {
  Cell cell;
  double t_enter_m = 0.0;  // ray parameter where the cell is entered
};

struct RayTrace {
  std::vector<TraversedCell> cells;  // traversed before the blocking cell
  std::optional<TraversedCell> blocker;
  double distance_m = 0.0;
  bool left_grid = false;
};

/// Exact grid-line traversal of the segment from (x, y) along compass angle
/// `angle_deg` up to `max_range_m`. Every cell the segment enters before
/// `max_range_m` is listed in order until `blocks(cell)` returns true. A ray
/// passing exactly through a lattice corner steps diagonally.
template <class BlocksFn>
RayTrace trace_ray(const GridSpec& spec, double x_m, double y_m,
                   double angle_deg, double max_range_m, BlocksFn&& blocks) {
  RayTrace out;
  const auto [dx, dy] = compass_direction(angle_deg);
  const double cs = spec.cell_size_m;
  const double inf = std::numeric_limits<double>::infinity();
  int i = static_cast<int>(std::floor(x_m / cs));
  int j = static_cast<int>(std::floor(y_m / cs));
  const int step_i = dx > 0 ? 1 : -1;
  const int step_j = dy > 0 ? 1 : -1;
  const double delta_i = dx != 0.0 ? cs / std::abs(dx) : inf;
  const double delta_j = dy != 0.0 ? cs / std::abs(dy) : inf;
  double t_max_i = dx > 0   ? ((i + 1) * cs - x_m) / dx
                   : dx < 0 ? (i * cs - x_m) / dx
                            : inf;
  double t_max_j = dy > 0   ? ((j + 1) * cs - y_m) / dy
                   : dy < 0 ? (j * cs - y_m) / dy
                            : inf;
  double t = 0.0;
  out.cells.reserve(static_cast<std::size_t>(2.0 * max_range_m / cs) + 4);
  for (;;) {
    const Cell c{i, j};
    if (!spec.in_bounds(c)) {
      out.left_grid = true;
      out.distance_m = t;
      return out;
    }
    if (blocks(c)) {
      out.blocker = TraversedCell{c, t};
      out.distance_m = t;
      return out;
    }
    out.cells.push_back({c, t});
    const double t_next = std::min(t_max_i, t_max_j);
    if (t_next >= max_range_m) break;
    if (t_max_i < t_max_j) {
      i += step_i;
      t = t_max_i;
      t_max_i += delta_i;
    } else if (t_max_j < t_max_i) {
      j += step_j;
      t = t_max_j;
      t_max_j += delta_j;
    } else {
      i += step_i;
      j += step_j;
      t = t_max_i;
      t_max_i += delta_i;
      t_max_j += delta_j;
    }
  }
  out.distance_m = max_range_m;
  return out;
}

struct BeamCast {
  double distance_m = 0.0;
  bool hit = false;
  std::vector<TraversedCell> swept;
  std::optional<TraversedCell> hit_cell;
};

inline BeamCast cast_beam(const OccupancyGrid& truth_grid, const Pose& origin,
                          double angle_deg, const LidarConfig& config) {
  const GridSpec& spec = truth_grid.spec();
  const Cell start = spec.cell_at(origin.x_m, origin.y_m);
  if (!spec.in_bounds(start)) throw InvalidPose("origin out of bounds");
  if (truth_grid.truth_occupied(start)) {
    throw InvalidPose("origin inside an obstacle");
  }
  RayTrace trace =
      trace_ray(spec, origin.x_m, origin.y_m, angle_deg, config.max_range_m,
                [&](Cell c) { return truth_grid.truth_occupied(c); });
  BeamCast out;
  out.hit = trace.blocker.has_value();
  out.distance_m = std::clamp(trace.distance_m, 0.0, config.max_range_m);
  out.swept = std::move(trace.cells);
  out.hit_cell = trace.blocker;
  return out;
}

// Pure noise step given a standard-normal draw `z`.
inline double noisy_distance(double distance_m, double z,
                             const LidarConfig& config) {
  double out = distance_m;
  if (config.noise_std_fraction > 0.0) {
    if (config.noise_mode == NoiseMode::Multiplicative) {
      out = distance_m * (1.0 + config.noise_std_fraction * z);
    } else {
      out = distance_m + config.noise_std_fraction * config.max_range_m * z;
    }
  }
  return std::clamp(out, 0.0, config.max_range_m);
}

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline double apply_noise(double distance_m, const LidarConfig& config,
                          Rng& rng) {
  return noisy_distance(distance_m, standard_normal(rng), config);
}

inline double lateral_confidence(double offset_m, double cell_size_m) {
  const double sigma = cell_size_m / 2.0;
  return std::exp(-(offset_m * offset_m) / (2.0 * sigma * sigma));
}

inline double range_confidence(double distance_m, const LidarConfig& config) {
  const double d = distance_m;
  if (d < config.blind_range_m) return 0.0;
  if (d < config.blind_range_m + config.ramp_in_m) {
    return (d - config.blind_range_m) / config.ramp_in_m;
  }
  const double fade_start = config.max_range_m - config.ramp_out_m;
  if (d <= fade_start) return 1.0;
  const double u = std::min(1.0, (d - fade_start) / config.ramp_out_m);
  return 1.0 - (1.0 - config.far_confidence) * u;
}

struct BeamGeometry {
  double x_m = 0.0;
  double y_m = 0.0;
  double angle_deg = 0.0;
};

// Perpendicular and along-beam offsets of a cell center.
inline std::pair<double, double> beam_offsets(const BeamGeometry& beam,
                                              Cell cell, const GridSpec& spec) {
  const auto [dx, dy] = compass_direction(beam.angle_deg);
  const double rx = spec.center_x(cell.i) - beam.x_m;
  const double ry = spec.center_y(cell.j) - beam.y_m;
  const double along = rx * dx + ry * dy;
  const double perpendicular = std::abs(rx * dy - ry * dx);
  return {perpendicular, along};
}

inline double measurement_confidence(const BeamGeometry& beam, Cell cell,
                                     double distance_m, const GridSpec& spec,
                                     const LidarConfig& config) {
  const double offset = beam_offsets(beam, cell, spec).first;
  return lateral_confidence(offset, spec.cell_size_m) *
         range_confidence(distance_m, config);
}

struct SweptCell {
  Cell cell;
  double confidence = 0.0;
};

struct LidarBeam {
  double angle_deg = 0.0;
  double distance_m = 0.0;
  bool hit = false;
  std::vector<SweptCell> swept;
  std::optional<SweptCell> terminal;
};

struct LidarScan {
  Pose origin;
  std::vector<LidarBeam> beams;
};

/// One beam with a pre-drawn standard-normal noise value. A noisy return
/// re-indexes the terminal cell along the same beam line and never reaches
/// past the true obstacle; a return pushed beyond max range becomes a miss.
/// Misses carry no noise.
inline LidarBeam simulate_beam(const OccupancyGrid& truth_grid,
                               const Pose& origin, double angle_deg, double z,
                               const LidarConfig& config) {
  const GridSpec& spec = truth_grid.spec();
  BeamCast cast = cast_beam(truth_grid, origin, angle_deg, config);
  const BeamGeometry geom{origin.x_m, origin.y_m, angle_deg};
  LidarBeam beam;
  beam.angle_deg = angle_deg;
  std::size_t keep = cast.swept.size();
  std::optional<Cell> terminal;
  if (cast.hit) {
    const double noisy = noisy_distance(cast.distance_m, z, config);
    if (noisy >= config.max_range_m) {
      beam.hit = false;
      beam.distance_m = config.max_range_m;
    } else {
      beam.hit = true;
      beam.distance_m = noisy;
      if (noisy >= cast.distance_m) {
        terminal = cast.hit_cell->cell;
      } else {
        // Last traversed cell entered at or before the noisy range.
        auto it = std::upper_bound(
            cast.swept.begin(), cast.swept.end(), noisy,
            [](double v, const TraversedCell& tc) { return v < tc.t_enter_m; });
        const std::size_t idx =
            it == cast.swept.begin()
                ? 0
                : static_cast<std::size_t>(it - cast.swept.begin()) - 1;
        terminal = cast.swept[idx].cell;
        keep = idx;
      }
    }
  } else {
    beam.hit = false;
    beam.distance_m = config.max_range_m;
  }
  beam.swept.reserve(keep);
  for (std::size_t n = 0; n < keep; ++n) {
    const Cell c = cast.swept[n].cell;
    const auto [perp, along] = beam_offsets(geom, c, spec);
    beam.swept.push_back({c, lateral_confidence(perp, spec.cell_size_m) *
                                 range_confidence(std::max(0.0, along), config)});
  }
  if (terminal) {
    beam.terminal = SweptCell{
        *terminal,
        measurement_confidence(geom, *terminal, beam.distance_m, spec, config)};
  }
  return beam;
}

// Noise draws happen in beam order before any casting.
inline LidarScan simulate_scan(const OccupancyGrid& truth_grid,
                               const Pose& origin, const LidarConfig& config,
                               Rng& rng) {
  const int n = config.beam_count();
  std::vector<double> draws(static_cast<std::size_t>(n));
  for (double& z : draws) z = standard_normal(rng);
  LidarScan scan;
  scan.origin = origin;
  scan.beams.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    scan.beams.push_back(simulate_beam(truth_grid, origin,
                                       config.beam_angle(k, origin.heading_deg),
                                       draws[static_cast<std::size_t>(k)],
                                       config));
  }
  return scan;
}

inline void integrate_scan(OccupancyGrid& belief, const LidarScan& scan,
                           const InverseSensorModel& model = {}) {
  std::vector<Cell> swept;
  for (const LidarBeam& beam : scan.beams) {
    for (const SweptCell& sc : beam.swept) {
      belief.observe(sc.cell, false, sc.confidence, model);
      swept.push_back(sc.cell);
    }
    if (beam.terminal) {
      belief.observe(beam.terminal->cell, true, beam.terminal->confidence,
                     model);
    }
  }
  belief.mark_visited(swept);
}

inline void write_scan_csv(const LidarScan& scan, std::ostream& out) {
  out << "angle_deg,distance_m,hit\n";
  for (const LidarBeam& b : scan.beams) {
    out << b.angle_deg << ',' << b.distance_m << ',' << (b.hit ? 1 : 0)
        << '\n';
  }
}

}  // namespace swarmex

#endif  // SWARMEX_SENSOR_HPP
