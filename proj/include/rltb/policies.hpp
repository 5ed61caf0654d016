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

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>

#include "rltb/gridworld.hpp"
#include "rltb/random.hpp"
#include "rltb/trace.hpp"

namespace rltb {

class ConstantPolicy final : public Policy {
 public:
  explicit ConstantPolicy(ActionId action) : action_(action) {}
  ActionId act(const StateId&) override { return action_; }
  std::unique_ptr<Policy> clone() const override { return std::make_unique<ConstantPolicy>(*this); }

 private:
  ActionId action_;
};

// Uniform over the action set. reseed(x) moves to the stream derived from
// (base seed, x).
class RandomPolicy final : public Policy {
 public:
  RandomPolicy(std::size_t action_count, std::uint64_t seed);
  ActionId act(const StateId&) override;
  void reseed(std::uint64_t seed) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<RandomPolicy>(*this); }

 private:
  std::size_t action_count_;
  std::uint64_t base_seed_;
  Rng rng_;
};

/// Greedy descent on a precomputed distance field over the gridworld's
/// nominal (slip-free) moves. Ties resolve to the lowest action index;
/// cells with no finite distance fall back to `fallback`.
class GridDistancePolicy final : public Policy {
 public:
  enum class Target {
    NearestPit,   // walks into the closest pit
    GoalAvoidingPits,  // shortest pit-free path to a goal
  };

  GridDistancePolicy(const GridworldConfig& config, Target target);

  ActionId act(const StateId& state) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<GridDistancePolicy>(*this); }

  // Steps to the target from the cell, if reachable.
  std::optional<std::size_t> distance(Cell cell) const;

 private:
  Gridworld grid_;
  Target target_;
  std::map<Cell, std::size_t> distance_;
};

}  // namespace rltb
