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
#include <vector>

#include "rltb/trace.hpp"

namespace rltb {

/// Greedy policy over a tabular action-value function. Unseen states behave
/// as all-zero rows; ties go to the lowest action index.
class QTablePolicy final : public Policy {
 public:
  explicit QTablePolicy(std::size_t action_count) : action_count_(action_count) {}

  ActionId act(const StateId& state) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<QTablePolicy>(*this); }

  std::size_t action_count() const noexcept { return action_count_; }
  const std::map<StateId, std::vector<double>>& table() const noexcept { return table_; }
  const std::vector<double>* find(const StateId& state) const;
  // Row for the state, created as zeros on first access.
  std::vector<double>& row(const StateId& state);

  friend bool operator==(const QTablePolicy& a, const QTablePolicy& b) {
    return a.action_count_ == b.action_count_ && a.table_ == b.table_;
  }

 private:
  std::size_t action_count_;
  std::map<StateId, std::vector<double>> table_;
};

ActionId greedy_action(const std::vector<double>& values);

// Linear decay from `start` to `end` over the first decay_fraction of the
// episodes, then constant.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  double decay_fraction = 0.8;

  double at(std::size_t episode, std::size_t episodes) const;
};

struct QLearningParams {
  std::size_t episodes = 1000;
  double alpha = 0.5;
  double gamma = 0.9;
  EpsilonSchedule epsilon;
  std::uint64_t seed = 0;
  std::size_t max_episode_steps = 200;
};

/// One-step Q-learning with ε-greedy exploration. Deterministic given
/// params.seed: the environment is reseeded from it.
QTablePolicy train_tabular_q(Environment& env, const QLearningParams& params);

}  // namespace rltb
