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

#include "rltb/qlearning.hpp"

#include <algorithm>

#include "rltb/error.hpp"
#include "rltb/random.hpp"

namespace rltb {

ActionId greedy_action(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return ActionId{best};
}

ActionId QTablePolicy::act(const StateId& state) {
  const auto* values = find(state);
  if (values == nullptr) return ActionId{0};
  return greedy_action(*values);
}

const std::vector<double>* QTablePolicy::find(const StateId& state) const {
  auto it = table_.find(state);
  return it == table_.end() ? nullptr : &it->second;
}

std::vector<double>& QTablePolicy::row(const StateId& state) {
  auto [it, inserted] = table_.try_emplace(state);
  if (inserted) it->second.assign(action_count_, 0.0);
  return it->second;
}

double EpsilonSchedule::at(std::size_t episode, std::size_t episodes) const {
  const double horizon = decay_fraction * static_cast<double>(episodes);
  if (horizon <= 0.0 || static_cast<double>(episode) >= horizon) return end;
  const double t = static_cast<double>(episode) / horizon;
  return start + (end - start) * t;
}

QTablePolicy train_tabular_q(Environment& env, const QLearningParams& params) {
  if (params.episodes < 1) throw Error(ErrorCode::DomainError, "episodes must be at least 1");
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) throw Error(ErrorCode::DomainError, "alpha must lie in (0, 1]");
  if (!(params.gamma >= 0.0 && params.gamma <= 1.0)) throw Error(ErrorCode::DomainError, "gamma must lie in [0, 1]");
  if (params.max_episode_steps < 1) throw Error(ErrorCode::DomainError, "max_episode_steps must be at least 1");

  const std::size_t n_actions = env.action_set().size();
  QTablePolicy q(n_actions);
  Rng rng(derive_seed(params.seed, {1}));
  env.reseed(derive_seed(params.seed, {2}));

  for (std::size_t episode = 0; episode < params.episodes; ++episode) {
    const double epsilon = params.epsilon.at(episode, params.episodes);
    StateId s = env.reset();
    if (is_terminal(env.current_terminal())) continue;
    for (std::size_t t = 0; t < params.max_episode_steps; ++t) {
      ActionId a = bernoulli(rng, epsilon) ? ActionId{uniform_index(rng, n_actions)} : greedy_action(q.row(s));
      StepOutcome out = env.step(a);
      double target = out.reward;
      if (!is_terminal(out.terminal)) {
        const auto& next = q.row(out.state);
        target += params.gamma * *std::max_element(next.begin(), next.end());
      }
      double& value = q.row(s)[a.index];
      value += params.alpha * (target - value);
      if (is_terminal(out.terminal)) break;
      s = std::move(out.state);
    }
  }
  return q;
}

}  // namespace rltb
