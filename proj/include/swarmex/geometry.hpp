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

#ifndef SWARMEX_GEOMETRY_HPP
#define SWARMEX_GEOMETRY_HPP

#include <cmath>
#include <numbers>
#include <utility>

#include "swarmex/common.hpp"

namespace swarmex {

// Headings are compass degrees: 0 is north (+y), 90 is east (+x).
struct Pose {
  double x_m = 0.0;
  double y_m = 0.0;
  double heading_deg = 0.0;
};

inline double normalize_deg(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d < 0.0) d += 360.0;
  if (d >= 360.0) d -= 360.0;
  return d;
}

inline int normalize_heading(int deg) { return ((deg % 360) + 360) % 360; }

// Unit direction (dx, dy) for a compass angle; near-zero components snap to 0
// so axis-aligned rays stay axis-aligned.
inline std::pair<double, double> compass_direction(double deg) {
  const double rad = deg * std::numbers::pi / 180.0;
  double dx = std::sin(rad);
  double dy = std::cos(rad);
  if (std::abs(dx) < 1e-12) dx = 0.0;
  if (std::abs(dy) < 1e-12) dy = 0.0;
  if (std::abs(std::abs(dx) - std::abs(dy)) < 1e-12) {
    dx = std::copysign(std::numbers::sqrt2 / 2.0, dx);
    dy = std::copysign(std::numbers::sqrt2 / 2.0, dy);
  }
  return {dx, dy};
}

// Grid step for a heading that is a multiple of 45 degrees.
inline Cell heading_step(int heading_deg) {
  switch (normalize_heading(heading_deg)) {
    case 0: return {0, 1};
    case 45: return {1, 1};
    case 90: return {1, 0};
    case 135: return {1, -1};
    case 180: return {0, -1};
    case 225: return {-1, -1};
    case 270: return {-1, 0};
    case 315: return {-1, 1};
    default: throw InvalidPose("heading must be a multiple of 45 degrees");
  }
}

// Inverse of heading_step for 8-adjacent displacements.
inline int step_heading(Cell delta) {
  static constexpr int table[3][3] = {
      // di = -1, 0, +1 ; rows dj = -1, 0, +1
      {225, 180, 135},
      {270, -1, 90},
      {315, 0, 45},
  };
  if (delta.i < -1 || delta.i > 1 || delta.j < -1 || delta.j > 1) return -1;
  return table[delta.j + 1][delta.i + 1];
}

// Minimal number of 45-degree turns between two headings.
inline int turns_between(int from_deg, int to_deg) {
  const int diff = normalize_heading(to_deg - from_deg) / 45;
  return diff <= 4 ? diff : 8 - diff;
}

}  // namespace swarmex

#endif  // SWARMEX_GEOMETRY_HPP
