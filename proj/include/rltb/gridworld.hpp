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

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rltb/random.hpp"
#include "rltb/trace.hpp"

namespace rltb {

struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

enum class RewardMode { Sparse, Dense };

struct GridworldConfig {
  int width = 5;
  int height = 5;
  Cell start{0, 0};
  std::vector<Cell> goal_cells{{4, 4}};
  std::vector<Cell> pit_cells;
  std::vector<Cell> wall_cells;
  double slip_probability = 0.0;
  RewardMode reward_mode = RewardMode::Sparse;
  double step_reward = -1.0;
  double goal_reward = 100.0;
  double pit_reward = -25.0;
  std::size_t max_episode_steps = 200;

  // Throws ConfigInvalid naming the violated invariant.
  void validate() const;
};

/// Rectangular gridworld. x grows to the right, y grows downward.
///
/// Actions, in index order: right, down, left, up. With probability
/// slip_probability a move deviates to one of the two perpendicular
/// directions (half each). Moves into walls or off the grid leave the agent
/// in place. Entering a goal pays goal_reward, entering a pit pays
/// pit_reward, and any other step pays step_reward (plus the signed
/// rightward displacement in Dense mode).
class Gridworld final : public Environment {
 public:
  static constexpr ActionId kRight{0};
  static constexpr ActionId kDown{1};
  static constexpr ActionId kLeft{2};
  static constexpr ActionId kUp{3};

  Gridworld(GridworldConfig config, std::uint64_t seed);

  const ActionSet& action_set() const override { return actions_; }
  StateId reset() override;
  StepOutcome step(ActionId action) override;
  StateId current_state() const override { return encode(position_); }
  TerminalClass current_terminal() const override { return terminal_; }
  Snapshot snapshot() const override;
  void restore(const Snapshot& token) override;
  double min_transition_probability() const override;
  void reseed(std::uint64_t seed) override { rng_.seed(seed); }
  std::unique_ptr<Environment> clone() const override;

  const GridworldConfig& config() const noexcept { return config_; }
  Cell position() const noexcept { return position_; }

  static StateId encode(Cell cell);
  static std::optional<Cell> decode(const StateId& state);

  TerminalClass classify(Cell cell) const;
  bool is_wall(Cell cell) const;
  bool in_bounds(Cell cell) const;
  // Cell reached by moving one step in the given direction, blocked moves stay.
  Cell move(Cell from, ActionId direction) const;
  // Exact outcome distribution of an action, merged per destination cell.
  std::vector<std::pair<double, Cell>> transition_distribution(Cell from, ActionId action) const;
  double reward_for(Cell from, Cell to) const;

 private:
  struct State {
    Cell position;
    TerminalClass terminal;
    Rng rng;
  };

  GridworldConfig config_;
  ActionSet actions_;
  std::set<Cell> goals_;
  std::set<Cell> pits_;
  std::set<Cell> walls_;
  Cell position_;
  TerminalClass terminal_ = TerminalClass::NonTerminal;
  Rng rng_;
};

std::unique_ptr<Environment> gridworld_new(const GridworldConfig& config, std::uint64_t seed);

}  // namespace rltb
