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

#ifndef SWARMEX_ROBOT_HPP
#define SWARMEX_ROBOT_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmex/common.hpp"
#include "swarmex/geometry.hpp"
#include "swarmex/grid_map.hpp"
#include "swarmex/planner.hpp"

namespace swarmex {

enum class Mode { Idle, Optimizing, Planning, Executing, Waiting, Blocked, Done };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::Idle: return "Idle";
    case Mode::Optimizing: return "Optimizing";
    case Mode::Planning: return "Planning";
    case Mode::Executing: return "Executing";
    case Mode::Waiting: return "Waiting";
    case Mode::Blocked: return "Blocked";
    case Mode::Done: return "Done";
  }
  return "?";
}

enum class MotionCommand { MoveForwardOneCell, TurnLeft45, TurnRight45, Stop };

inline constexpr int kConflictWaitTicks = 3;

struct RobotState {
  int id = 0;
  Cell cell{1, 1};
  int heading_deg = 0;
  int initial_energy = 0;
  int energy_steps = 0;
  Mode mode = Mode::Idle;
  std::vector<Cell> current_path;  // cells still to enter, next first
  std::vector<Cell> current_targets;
  int moves = 0;
  int turns = 0;
  int wait_ticks = 0;
  std::optional<Cell> blocker_cell;  // cell to avoid on the next replan
  int fruitless_rounds = 0;
  std::uint64_t fitevals = 0;
  double computation_ms = 0.0;

  int steps_used() const { return initial_energy - energy_steps; }
  Pose pose(const GridSpec& spec) const {
    return {spec.center_x(cell.i), spec.center_y(cell.j),
            static_cast<double>(heading_deg)};
  }
  std::optional<Cell> next_cell() const {
    if (current_path.empty()) return std::nullopt;
    return current_path.front();
  }
};

inline RobotState make_robot(int id, const GridSpec& spec, const Pose& start,
                             int energy) {
  if (energy < 0) throw ConfigError("energy budget must be non-negative");
  const Cell c = spec.cell_at(start.x_m, start.y_m);
  if (!spec.in_bounds(c)) throw InvalidPose("start pose outside the grid");
  const int heading = static_cast<int>(std::lround(start.heading_deg));
  if (heading % 45 != 0) {
    throw InvalidPose("start heading must be a multiple of 45 degrees");
  }
  RobotState r;
  r.id = id;
  r.cell = c;
  r.heading_deg = normalize_heading(heading);
  r.initial_energy = energy;
  r.energy_steps = energy;
  return r;
}

enum class MotionResult { Turned, Moved, Stopped, BlockedWall, BlockedRobot,
                          BlockedBounds };

/// Executes one command against the world. A move that cannot happen leaves
/// the pose and energy untouched and sets mode Blocked. Diagonal moves also
/// need both orthogonal neighbours free of walls.
inline MotionResult apply_command(RobotState& robot, MotionCommand cmd,
                                  const OccupancyGrid& truth,
                                  std::span<const Cell> other_robots = {}) {
  if (cmd == MotionCommand::Stop) return MotionResult::Stopped;
  if (robot.energy_steps <= 0) {
    throw EnergyExhausted("robot " + std::to_string(robot.id) +
                          " has no energy left");
  }
  if (cmd == MotionCommand::TurnLeft45 || cmd == MotionCommand::TurnRight45) {
    robot.heading_deg = normalize_heading(
        robot.heading_deg + (cmd == MotionCommand::TurnLeft45 ? -45 : 45));
    --robot.energy_steps;
    ++robot.turns;
    return MotionResult::Turned;
  }
  const GridSpec& spec = truth.spec();
  const Cell step = heading_step(robot.heading_deg);
  const Cell dest{robot.cell.i + step.i, robot.cell.j + step.j};
  auto wall = [&](Cell c) { return truth.truth_occupied(c); };
  MotionResult result = MotionResult::Moved;
  if (!spec.in_bounds(dest)) {
    result = MotionResult::BlockedBounds;
  } else if (wall(dest) ||
             (step.i != 0 && step.j != 0 &&
              (wall({robot.cell.i + step.i, robot.cell.j}) ||
               wall({robot.cell.i, robot.cell.j + step.j})))) {
    result = MotionResult::BlockedWall;
  } else if (std::find(other_robots.begin(), other_robots.end(), dest) !=
             other_robots.end()) {
    result = MotionResult::BlockedRobot;
  }
  if (result != MotionResult::Moved) {
    robot.mode = Mode::Blocked;
    return result;
  }
  robot.cell = dest;
  --robot.energy_steps;
  ++robot.moves;
  return result;
}

/// Command that brings the heading one turn closer to `target_heading`, or
/// moves when already aligned. Equal-length turns go right.
inline MotionCommand steer_toward(int heading_deg, int target_heading_deg) {
  const int diff = normalize_heading(target_heading_deg - heading_deg);
  if (diff == 0) return MotionCommand::MoveForwardOneCell;
  return diff <= 180 ? MotionCommand::TurnRight45 : MotionCommand::TurnLeft45;
}

struct TargetSelection {
  std::vector<Cell> targets;
  double best_fitness = 0.0;
  std::size_t expected_gain = 0;
};

enum class ConflictVerdict { Clear, Hold, Yield };

/// What a robot can ask of the rest of the system during one tick. Only the
/// robot's own state is passed in; everything else is behind these calls.
struct NavServices {
  std::function<double()> exploration_rate;
  // nullopt when no feasible target exists.
  std::function<std::optional<TargetSelection>(RobotState&)> select_targets;
  std::function<std::optional<Path>(const RobotState&, std::span<const Cell>)>
      plan;
  // True when the belief marks a cell of the remaining path Occupied.
  std::function<bool(const RobotState&)> path_invalidated;
  std::function<ConflictVerdict(const RobotState&, Cell next)> conflict;
  // Applies a motion command to the world, scanning after moves.
  std::function<MotionResult(RobotState&, MotionCommand)> actuate;
  double done_rate = 0.99;
  int max_fruitless_rounds = 3;
};

namespace detail {

inline void finish(RobotState& r) {
  r.mode = Mode::Done;
  r.current_path.clear();
}

inline void fruitless(RobotState& r, const NavServices& s) {
  if (++r.fruitless_rounds >= s.max_fruitless_rounds) {
    finish(r);
  } else {
    r.current_targets.clear();
    r.mode = Mode::Optimizing;
  }
}

}  // namespace detail

/// Advances the navigation state machine by one transition.
inline void fsm_tick(RobotState& r, const NavServices& s) {
  if (r.mode == Mode::Done) return;
  if (s.exploration_rate && s.exploration_rate() >= s.done_rate) {
    detail::finish(r);
    return;
  }
  switch (r.mode) {
    case Mode::Idle:
      r.current_targets.clear();
      r.current_path.clear();
      r.mode = r.energy_steps > 0 ? Mode::Optimizing : Mode::Done;
      return;

    case Mode::Optimizing: {
      if (r.energy_steps <= 0) return detail::finish(r);
      auto sel = s.select_targets(r);
      if (!sel || sel->targets.empty()) return detail::finish(r);
      if (sel->expected_gain == 0) {
        if (++r.fruitless_rounds >= s.max_fruitless_rounds) {
          return detail::finish(r);
        }
      } else {
        r.fruitless_rounds = 0;
      }
      r.current_targets = std::move(sel->targets);
      r.mode = Mode::Planning;
      return;
    }

    case Mode::Planning: {
      std::vector<Cell> avoid;
      if (r.blocker_cell) avoid.push_back(*r.blocker_cell);
      r.blocker_cell.reset();
      auto path = s.plan(r, avoid);
      if (!path) return detail::fruitless(r, s);
      if (path_energy(*path, r.heading_deg) > r.energy_steps) {
        return detail::finish(r);
      }
      r.current_path.assign(path->cells.begin() + 1, path->cells.end());
      r.mode = r.current_path.empty() ? Mode::Idle : Mode::Executing;
      return;
    }

    case Mode::Executing: {
      if (r.current_path.empty()) {
        r.mode = Mode::Idle;
        return;
      }
      if (s.path_invalidated && s.path_invalidated(r)) {
        r.mode = Mode::Planning;
        return;
      }
      if (r.energy_steps <= 0) return detail::finish(r);
      const Cell next = r.current_path.front();
      const int want = step_heading({next.i - r.cell.i, next.j - r.cell.j});
      if (want < 0) {
        r.mode = Mode::Planning;
        return;
      }
      const MotionCommand cmd = steer_toward(r.heading_deg, want);
      if (cmd == MotionCommand::MoveForwardOneCell && s.conflict) {
        const ConflictVerdict v = s.conflict(r, next);
        if (v == ConflictVerdict::Hold) return;
        if (v == ConflictVerdict::Yield) {
          r.mode = Mode::Waiting;
          r.wait_ticks = 0;
          return;
        }
      }
      const MotionResult res = s.actuate(r, cmd);
      if (res == MotionResult::Moved) {
        r.current_path.erase(r.current_path.begin());
        if (r.current_path.empty()) r.mode = Mode::Idle;
      }
      return;
    }

    case Mode::Waiting: {
      ++r.wait_ticks;
      const auto next = r.next_cell();
      if (!next) {
        r.mode = Mode::Idle;
        return;
      }
      if (!s.conflict || s.conflict(r, *next) == ConflictVerdict::Clear) {
        r.mode = Mode::Executing;
        return;
      }
      if (r.wait_ticks >= kConflictWaitTicks) {
        r.blocker_cell = *next;
        r.mode = Mode::Planning;
      }
      return;
    }

    case Mode::Blocked:
      r.mode = Mode::Planning;
      return;

    case Mode::Done:
      return;
  }
}

/// Priority rule for two robots contending for cells on the next tick: the
/// lower id keeps Executing, the higher id starts Waiting. Returns true when
/// a conflict was found.
inline bool solve_conflict(RobotState& a, RobotState& b) {
  const auto na = a.next_cell();
  const auto nb = b.next_cell();
  const bool contended = (na && (*na == b.cell || (nb && *na == *nb))) ||
                         (nb && *nb == a.cell);
  if (!contended) return false;
  RobotState& keeper = a.id < b.id ? a : b;
  RobotState& waiter = a.id < b.id ? b : a;
  if (keeper.mode == Mode::Waiting) keeper.mode = Mode::Executing;
  waiter.mode = Mode::Waiting;
  waiter.wait_ticks = 0;
  return true;
}

/// Mission-side verdict for robot `r` about to enter `next`, given everyone
/// else. The lower id has priority in head-on and same-cell contention;
/// any robot standing on the cell otherwise forces a wait.
inline ConflictVerdict judge_conflict(const RobotState& r, Cell next,
                                      std::span<const RobotState> robots) {
  ConflictVerdict verdict = ConflictVerdict::Clear;
  for (const RobotState& q : robots) {
    if (q.id == r.id) continue;
    const auto qn = q.mode == Mode::Done ? std::nullopt : q.next_cell();
    if (q.cell == next) {
      const bool head_on = qn && *qn == r.cell;
      if (head_on && r.id < q.id) {
        verdict = ConflictVerdict::Hold;
      } else {
        return ConflictVerdict::Yield;
      }
    } else if (qn && *qn == next && q.id < r.id &&
               (q.mode == Mode::Executing || q.mode == Mode::Waiting)) {
      return ConflictVerdict::Yield;
    }
  }
  return verdict;
}

}  // namespace swarmex

#endif  // SWARMEX_ROBOT_HPP
