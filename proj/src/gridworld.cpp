// Copyright 2026 The rltb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rltb/gridworld.hpp"

#include <algorithm>
#include <charconv>

#include "rltb/error.hpp"

namespace rltb {

namespace {

std::string describe(Cell c) { return "[" + std::to_string(c.x) + "," + std::to_string(c.y) + "]"; }

Cell offset(Cell c, ActionId direction) {
  switch (direction.index) {
    case 0: return {c.x + 1, c.y};
    case 1: return {c.x, c.y + 1};
    case 2: return {c.x - 1, c.y};
    default: return {c.x, c.y - 1};
  }
}

// Right/left deviate to down/up; down/up deviate to right/left.
std::pair<ActionId, ActionId> perpendicular(ActionId direction) {
  if (direction.index % 2 == 0) return {Gridworld::kDown, Gridworld::kUp};
  return {Gridworld::kRight, Gridworld::kLeft};
}

}  // namespace

void GridworldConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); };
  if (width < 1 || height < 1) fail("width and height must be positive");
  auto inside = [&](Cell c) { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; };
  auto check_all = [&](const std::vector<Cell>& cells, const char* name) {
    for (Cell c : cells) {
      if (!inside(c)) fail(std::string(name) + " cell " + describe(c) + " lies outside the grid");
    }
  };
  if (!inside(start)) fail("start cell " + describe(start) + " lies outside the grid");
  check_all(goal_cells, "goal_cells");
  check_all(pit_cells, "pit_cells");
  check_all(wall_cells, "wall_cells");
  auto contains = [](const std::vector<Cell>& v, Cell c) { return std::find(v.begin(), v.end(), c) != v.end(); };
  if (contains(pit_cells, start)) fail("start cell must not be a pit");
  if (contains(wall_cells, start)) fail("start cell must not be a wall");
  for (Cell g : goal_cells) {
    if (contains(pit_cells, g)) fail("goal cell " + describe(g) + " is also a pit");
    if (contains(wall_cells, g)) fail("goal cell " + describe(g) + " is also a wall");
  }
  for (Cell p : pit_cells) {
    if (contains(wall_cells, p)) fail("pit cell " + describe(p) + " is also a wall");
  }
  if (!(slip_probability >= 0.0 && slip_probability < 1.0)) fail("slip_probability must lie in [0, 1)");
  if (max_episode_steps < 1) fail("max_episode_steps must be at least 1");
}

Gridworld::Gridworld(GridworldConfig config, std::uint64_t seed)
    : config_(std::move(config)), actions_({"right", "down", "left", "up"}), rng_(seed) {
  config_.validate();
  goals_.insert(config_.goal_cells.begin(), config_.goal_cells.end());
  pits_.insert(config_.pit_cells.begin(), config_.pit_cells.end());
  walls_.insert(config_.wall_cells.begin(), config_.wall_cells.end());
  position_ = config_.start;
  terminal_ = classify(position_);
}

StateId Gridworld::reset() {
  position_ = config_.start;
  terminal_ = classify(position_);
  return current_state();
}

StepOutcome Gridworld::step(ActionId action) {
  if (!actions_.contains(action)) {
    throw Error(ErrorCode::InvalidAction, "gridworld has no action index " + std::to_string(action.index));
  }
  if (is_terminal(terminal_)) {
    throw Error(ErrorCode::EnvironmentState, "step called in terminal state " + current_state().encoding());
  }
  ActionId direction = action;
  const double p = config_.slip_probability;
  if (p > 0.0 && bernoulli(rng_, p)) {
    const auto [first, second] = perpendicular(action);
    direction = bernoulli(rng_, 0.5) ? first : second;
  }
  const Cell from = position_;
  position_ = move(from, direction);
  terminal_ = classify(position_);
  return {current_state(), reward_for(from, position_), terminal_};
}

Snapshot Gridworld::snapshot() const { return Snapshot(State{position_, terminal_, rng_}); }

void Gridworld::restore(const Snapshot& token) {
  const auto* s = std::any_cast<State>(&token.payload());
  if (s == nullptr) throw Error(ErrorCode::SnapshotUnsupported, "snapshot was not produced by a gridworld");
  position_ = s->position;
  terminal_ = s->terminal;
  rng_ = s->rng;
}

double Gridworld::min_transition_probability() const {
  const double p = config_.slip_probability;
  if (p == 0.0) return 1.0;
  return std::min(1.0 - p, p / 2.0);
}

std::unique_ptr<Environment> Gridworld::clone() const { return std::make_unique<Gridworld>(*this); }

StateId Gridworld::encode(Cell cell) {
  return StateId("(" + std::to_string(cell.x) + "," + std::to_string(cell.y) + ")");
}

std::optional<Cell> Gridworld::decode(const StateId& state) {
  const std::string& s = state.encoding();
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') return std::nullopt;
  const auto comma = s.find(',');
  if (comma == std::string::npos) return std::nullopt;
  Cell c;
  auto rx = std::from_chars(s.data() + 1, s.data() + comma, c.x);
  auto ry = std::from_chars(s.data() + comma + 1, s.data() + s.size() - 1, c.y);
  if (rx.ec != std::errc{} || ry.ec != std::errc{} || rx.ptr != s.data() + comma ||
      ry.ptr != s.data() + s.size() - 1) {
    return std::nullopt;
  }
  return c;
}

TerminalClass Gridworld::classify(Cell cell) const {
  if (pits_.contains(cell)) return TerminalClass::Unsafe;
  if (goals_.contains(cell)) return TerminalClass::Goal;
  return TerminalClass::NonTerminal;
}

bool Gridworld::is_wall(Cell cell) const { return walls_.contains(cell); }

bool Gridworld::in_bounds(Cell cell) const {
  return cell.x >= 0 && cell.y >= 0 && cell.x < config_.width && cell.y < config_.height;
}

Cell Gridworld::move(Cell from, ActionId direction) const {
  const Cell to = offset(from, direction);
  if (!in_bounds(to) || is_wall(to)) return from;
  return to;
}

std::vector<std::pair<double, Cell>> Gridworld::transition_distribution(Cell from, ActionId action) const {
  std::vector<std::pair<double, Cell>> out;
  auto add = [&](double p, Cell c) {
    if (p <= 0.0) return;
    for (auto& [q, d] : out) {
      if (d == c) {
        q += p;
        return;
      }
    }
    out.emplace_back(p, c);
  };
  const double p = config_.slip_probability;
  add(1.0 - p, move(from, action));
  const auto [first, second] = perpendicular(action);
  add(p / 2.0, move(from, first));
  add(p / 2.0, move(from, second));
  return out;
}

double Gridworld::reward_for(Cell from, Cell to) const {
  switch (classify(to)) {
    case TerminalClass::Goal: return config_.goal_reward;
    case TerminalClass::Unsafe: return config_.pit_reward;
    case TerminalClass::NonTerminal: break;
  }
  double r = config_.step_reward;
  if (config_.reward_mode == RewardMode::Dense) r += static_cast<double>(to.x - from.x);
  return r;
}

std::unique_ptr<Environment> gridworld_new(const GridworldConfig& config, std::uint64_t seed) {
  return std::make_unique<Gridworld>(config, seed);
}

}  // namespace rltb
