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

#ifndef SWARMEX_GRID_MAP_HPP
#define SWARMEX_GRID_MAP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "swarmex/common.hpp"

namespace swarmex {

struct GridSpec {
  int width_cells = 0;
  int height_cells = 0;
  double cell_size_m = 0.1;

  double width_m() const { return width_cells * cell_size_m; }
  double height_m() const { return height_cells * cell_size_m; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(width_cells) * height_cells;
  }
  bool in_bounds(Cell c) const {
    return c.i >= 0 && c.j >= 0 && c.i < width_cells && c.j < height_cells;
  }
  // Interior excludes the one-cell perimeter ring.
  bool is_interior(Cell c) const {
    return c.i > 0 && c.j > 0 && c.i < width_cells - 1 &&
           c.j < height_cells - 1;
  }
  std::size_t interior_count() const {
    if (width_cells < 3 || height_cells < 3) return 0;
    return static_cast<std::size_t>(width_cells - 2) * (height_cells - 2);
  }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.j) * width_cells + c.i;
  }
  Cell cell_of(std::size_t idx) const {
    return {static_cast<int>(idx % width_cells),
            static_cast<int>(idx / width_cells)};
  }
  // Cell containing a metric point; may be out of bounds.
  Cell cell_at(double x_m, double y_m) const {
    return {static_cast<int>(std::floor(x_m / cell_size_m)),
            static_cast<int>(std::floor(y_m / cell_size_m))};
  }
  double center_x(int i) const { return (i + 0.5) * cell_size_m; }
  double center_y(int j) const { return (j + 0.5) * cell_size_m; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class CellState : std::uint8_t { Occupied, Empty, Unknown };

inline const char* to_string(CellState s) {
  switch (s) {
    case CellState::Occupied: return "Occupied";
    case CellState::Empty: return "Empty";
    case CellState::Unknown: return "Unknown";
  }
  return "?";
}

// Additive log-odds increments of the inverse sensor model.
struct InverseSensorModel {
  double hit_increment = 0.85;
  double miss_increment = -0.4;
  double min_log_odds = -5.0;
  double max_log_odds = 5.0;
};

inline double logodds_update(double cell_log_odds, bool hit, double confidence,
                             const InverseSensorModel& model = {}) {
  if (!std::isfinite(cell_log_odds) || !std::isfinite(confidence)) {
    throw NumericError("logodds_update: non-finite input");
  }
  if (confidence < 0.0 || confidence > 1.0) {
    throw NumericError("logodds_update: confidence outside [0,1]");
  }
  const double step = hit ? model.hit_increment : model.miss_increment;
  return std::clamp(cell_log_odds + confidence * step, model.min_log_odds,
                    model.max_log_odds);
}

inline CellState classify(double cell_log_odds) {
  if (cell_log_odds > 0.0) return CellState::Occupied;
  if (cell_log_odds < 0.0) return CellState::Empty;
  return CellState::Unknown;
}

inline double occupancy_probability(double log_odds) {
  return 1.0 / (1.0 + std::exp(-log_odds));
}

/// Belief grid in log-odds with a monotone visited layer and, for the
/// simulated world, a ground-truth obstacle mask.
///
/// A cell is Unknown until it receives its first nonzero-confidence update;
/// after that its state follows the sign of its log-odds, with exactly zero
/// read as Empty. The touched bit makes Unknown sticky-false, so exploration
/// rate can only grow.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  explicit OccupancyGrid(GridSpec spec)
      : spec_(spec),
        log_odds_(spec.cell_count(), 0.0),
        touched_(spec.cell_count(), 0),
        visited_(spec.cell_count(), 0) {
    if (spec.width_cells <= 0 || spec.height_cells <= 0 ||
        !(spec.cell_size_m > 0.0)) {
      throw MalformedMap("grid dimensions and cell size must be positive");
    }
  }

  const GridSpec& spec() const { return spec_; }
  bool in_bounds(Cell c) const { return spec_.in_bounds(c); }

  double log_odds(Cell c) const { return log_odds_[checked(c)]; }
  double log_odds_at(std::size_t idx) const { return log_odds_[idx]; }
  bool touched(Cell c) const { return touched_[checked(c)] != 0; }
  bool visited(Cell c) const { return visited_[checked(c)] != 0; }

  CellState state(Cell c) const { return state_at(checked(c)); }
  CellState state_at(std::size_t idx) const {
    if (!touched_[idx]) return CellState::Unknown;
    return log_odds_[idx] > 0.0 ? CellState::Occupied : CellState::Empty;
  }
  bool occupied_at(std::size_t idx) const {
    return touched_[idx] && log_odds_[idx] > 0.0;
  }

  // Zero-confidence observations are no-ops and leave the cell Unknown.
  void observe(Cell c, bool hit, double confidence,
               const InverseSensorModel& model = {}) {
    const std::size_t idx = checked(c);
    const double updated = logodds_update(log_odds_[idx], hit, confidence, model);
    if (confidence == 0.0) return;
    log_odds_[idx] = updated;
    touch(idx, c);
  }

  // Direct assignment for scripted scenarios; any nonzero value touches.
  void set_log_odds(Cell c, double value) {
    if (!std::isfinite(value)) throw NumericError("set_log_odds: non-finite");
    const std::size_t idx = checked(c);
    log_odds_[idx] = value;
    if (value != 0.0) touch(idx, c);
  }

  void mark_visited(std::span<const Cell> cells) {
    for (Cell c : cells) {
      if (!spec_.in_bounds(c)) {
        throw IndexError("mark_visited: cell " + swarmex::to_string(c) +
                         " out of bounds");
      }
    }
    for (Cell c : cells) {
      auto& v = visited_[spec_.index(c)];
      if (!v) {
        v = 1;
        ++visited_count_;
      }
    }
  }
  std::size_t visited_count() const { return visited_count_; }

  // Interior cells that have left the Unknown state.
  std::size_t classified_interior_count() const { return classified_interior_; }

  bool has_truth() const { return truth_ != nullptr; }
  bool truth_occupied(Cell c) const {
    return (*truth_)[checked(c)] != 0;
  }
  bool truth_occupied_at(std::size_t idx) const { return (*truth_)[idx] != 0; }
  void set_truth(std::vector<std::uint8_t> mask) {
    if (mask.size() != spec_.cell_count()) {
      throw MalformedMap("truth mask size mismatch");
    }
    truth_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(mask));
  }
  const std::vector<std::uint8_t>& truth_mask() const { return *truth_; }

  // Belief-only copy: fitness code never sees the truth layer.
  OccupancyGrid snapshot() const {
    OccupancyGrid copy = *this;
    copy.truth_.reset();
    return copy;
  }

  // Fresh all-Unknown belief over the same frame.
  OccupancyGrid blank_belief() const { return OccupancyGrid(spec_); }

 private:
  std::size_t checked(Cell c) const {
    if (!spec_.in_bounds(c)) {
      throw IndexError("cell " + swarmex::to_string(c) + " out of bounds");
    }
    return spec_.index(c);
  }
  void touch(std::size_t idx, Cell c) {
    if (!touched_[idx]) {
      touched_[idx] = 1;
      if (spec_.is_interior(c)) ++classified_interior_;
    }
  }

  GridSpec spec_{};
  std::vector<double> log_odds_;
  std::vector<std::uint8_t> touched_;
  std::vector<std::uint8_t> visited_;
  std::shared_ptr<const std::vector<std::uint8_t>> truth_;
  std::size_t classified_interior_ = 0;
  std::size_t visited_count_ = 0;
};

inline double exploration_rate(const OccupancyGrid& grid) {
  const std::size_t interior = grid.spec().interior_count();
  if (interior == 0) return 0.0;
  return static_cast<double>(grid.classified_interior_count()) /
         static_cast<double>(interior);
}

inline std::size_t count_unknown(const OccupancyGrid& grid) {
  return grid.spec().interior_count() - grid.classified_interior_count();
}

// Parses a '#'/'.' map. The first text line is the northmost row.
inline OccupancyGrid load_ascii_map(std::string_view text, double cell_size_m) {
  std::vector<std::string_view> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    rows.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty()) throw MalformedMap("empty map");
  const std::size_t width = rows.front().size();
  if (width == 0) throw MalformedMap("empty first row");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw MalformedMap("ragged row " + std::to_string(r));
    }
  }
  GridSpec spec{static_cast<int>(width), static_cast<int>(rows.size()),
                cell_size_m};
  OccupancyGrid grid(spec);
  std::vector<std::uint8_t> truth(spec.cell_count(), 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int j = spec.height_cells - 1 - static_cast<int>(r);
    for (std::size_t i = 0; i < width; ++i) {
      const char ch = rows[r][i];
      if (ch != '#' && ch != '.') {
        throw MalformedMap("unknown character at row " + std::to_string(r) +
                           " column " + std::to_string(i));
      }
      const Cell c{static_cast<int>(i), j};
      const bool wall = ch == '#';
      if (!spec.is_interior(c) && !wall) {
        throw MalformedMap("open perimeter at row " + std::to_string(r) +
                           " column " + std::to_string(i));
      }
      truth[spec.index(c)] = wall ? 1 : 0;
    }
  }
  grid.set_truth(std::move(truth));
  return grid;
}

inline OccupancyGrid load_map_file(const std::filesystem::path& path,
                                   double cell_size_m) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open map file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_ascii_map(buffer.str(), cell_size_m);
}

// Coarsens a truth map by an integer factor; a coarse cell is an obstacle if
// any of its fine cells is. The perimeter stays closed.
inline OccupancyGrid downsample(const OccupancyGrid& truth_grid, int factor) {
  if (factor < 1) throw MalformedMap("downsample factor must be >= 1");
  if (factor == 1) return truth_grid;
  const GridSpec& fine = truth_grid.spec();
  GridSpec coarse{(fine.width_cells + factor - 1) / factor,
                  (fine.height_cells + factor - 1) / factor,
                  fine.cell_size_m * factor};
  std::vector<std::uint8_t> mask(coarse.cell_count(), 0);
  for (int j = 0; j < fine.height_cells; ++j) {
    for (int i = 0; i < fine.width_cells; ++i) {
      if (truth_grid.truth_occupied({i, j})) {
        mask[coarse.index({i / factor, j / factor})] = 1;
      }
    }
  }
  for (int i = 0; i < coarse.width_cells; ++i) {
    mask[coarse.index({i, 0})] = 1;
    mask[coarse.index({i, coarse.height_cells - 1})] = 1;
  }
  for (int j = 0; j < coarse.height_cells; ++j) {
    mask[coarse.index({0, j})] = 1;
    mask[coarse.index({coarse.width_cells - 1, j})] = 1;
  }
  OccupancyGrid out(coarse);
  out.set_truth(std::move(mask));
  return out;
}

// Loads a map authored at `source_cell_m` and coarsens it to `cell_size_m`.
inline OccupancyGrid load_map_at_resolution(const std::filesystem::path& path,
                                            double source_cell_m,
                                            double cell_size_m) {
  const double ratio = cell_size_m / source_cell_m;
  const int factor = static_cast<int>(std::lround(ratio));
  if (factor < 1 || std::abs(ratio - factor) > 1e-9) {
    throw ConfigError("cell size must be an integer multiple of " +
                      std::to_string(source_cell_m) + " m");
  }
  return downsample(load_map_file(path, source_cell_m), factor);
}

inline double interior_obstacle_ratio(const OccupancyGrid& truth_grid) {
  const GridSpec& spec = truth_grid.spec();
  std::size_t walls = 0;
  for (int j = 1; j < spec.height_cells - 1; ++j) {
    for (int i = 1; i < spec.width_cells - 1; ++i) {
      walls += truth_grid.truth_occupied({i, j}) ? 1 : 0;
    }
  }
  return spec.interior_count() == 0
             ? 0.0
             : static_cast<double>(walls) / spec.interior_count();
}

// Binary PGM of the belief: 0 occupied, 128 unknown, 255 free. North up.
inline void write_pgm(const OccupancyGrid& grid, std::ostream& out) {
  const GridSpec& spec = grid.spec();
  out << "P5\n" << spec.width_cells << ' ' << spec.height_cells << "\n255\n";
  std::string row(static_cast<std::size_t>(spec.width_cells), '\0');
  for (int j = spec.height_cells - 1; j >= 0; --j) {
    for (int i = 0; i < spec.width_cells; ++i) {
      unsigned char v = 128;
      switch (grid.state({i, j})) {
        case CellState::Occupied: v = 0; break;
        case CellState::Empty: v = 255; break;
        case CellState::Unknown: v = 128; break;
      }
      row[static_cast<std::size_t>(i)] = static_cast<char>(v);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

}  // namespace swarmex

#endif  // SWARMEX_GRID_MAP_HPP
