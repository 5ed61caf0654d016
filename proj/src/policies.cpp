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

#include "rltb/policies.hpp"

#include "rltb/error.hpp"

namespace rltb {

RandomPolicy::RandomPolicy(std::size_t action_count, std::uint64_t seed)
    : action_count_(action_count), base_seed_(seed), rng_(seed) {
  if (action_count == 0) throw Error(ErrorCode::DomainError, "random policy needs at least one action");
}

ActionId RandomPolicy::act(const StateId&) { return ActionId{uniform_index(rng_, action_count_)}; }

void RandomPolicy::reseed(std::uint64_t seed) { rng_.seed(derive_seed(base_seed_, {seed})); }

GridDistancePolicy::GridDistancePolicy(const GridworldConfig& config, Target target)
    : grid_(config, 0), target_(target) {
  const auto& targets = target == Target::NearestPit ? config.pit_cells : config.goal_cells;
  for (Cell c : targets) distance_[c] = 0;
  // Bellman-Ford style relaxation over nominal moves; grids are small.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < config.height; ++y) {
      for (int x = 0; x < config.width; ++x) {
        const Cell c{x, y};
        if (grid_.is_wall(c) || is_terminal(grid_.classify(c))) continue;
        for (ActionId a : grid_.action_set().all()) {
          const Cell next = grid_.move(c, a);
          if (target == Target::GoalAvoidingPits && grid_.classify(next) == TerminalClass::Unsafe) continue;
          auto it = distance_.find(next);
          if (it == distance_.end()) continue;
          auto mine = distance_.find(c);
          if (mine == distance_.end() || it->second + 1 < mine->second) {
            distance_[c] = it->second + 1;
            changed = true;
          }
        }
      }
    }
  }
}

std::optional<std::size_t> GridDistancePolicy::distance(Cell cell) const {
  auto it = distance_.find(cell);
  if (it == distance_.end()) return std::nullopt;
  return it->second;
}

ActionId GridDistancePolicy::act(const StateId& state) {
  const auto cell = Gridworld::decode(state);
  if (!cell) return ActionId{0};
  std::optional<ActionId> best;
  std::size_t best_distance = 0;
  std::optional<ActionId> safe;
  for (ActionId a : grid_.action_set().all()) {
    const Cell next = grid_.move(*cell, a);
    const bool into_pit = grid_.classify(next) == TerminalClass::Unsafe;
    if (target_ == Target::GoalAvoidingPits && into_pit) continue;
    if (!safe) safe = a;
    const auto d = distance(next);
    if (d && (!best || *d < best_distance)) {
      best = a;
      best_distance = *d;
    }
  }
  if (best) return *best;
  return safe.value_or(ActionId{0});
}

}  // namespace rltb
