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

#include "rltb/explicit_mdp.hpp"

#include <algorithm>
#include <cmath>

#include "rltb/error.hpp"

namespace rltb {

void ExplicitMdp::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); };
  if (states.empty()) fail("explicit MDP has no states");
  if (action_labels.empty()) fail("explicit MDP has no actions");
  if (initial >= states.size()) fail("initial state index out of range");
  if (terminal_class.size() != states.size()) fail("terminal_class must have one entry per state");
  if (transitions.size() != states.size()) fail("transitions must have one row per state");
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (is_terminal(terminal_class[s])) continue;
    if (transitions[s].size() != action_labels.size()) {
      fail("state " + states[s] + " must list a distribution for every action");
    }
    for (std::size_t a = 0; a < action_labels.size(); ++a) {
      double total = 0.0;
      for (const auto& t : transitions[s][a]) {
        if (!(t.probability > 0.0)) fail("state " + states[s] + " lists a non-positive probability");
        if (t.next >= states.size()) fail("state " + states[s] + " has a successor index out of range");
        total += t.probability;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        fail("probabilities of (" + states[s] + ", " + action_labels[a] + ") do not sum to 1");
      }
    }
  }
}

double ExplicitMdp::min_probability() const {
  double m = 1.0;
  for (std::size_t s = 0; s < transitions.size(); ++s) {
    if (is_terminal(terminal_class[s])) continue;
    for (const auto& dist : transitions[s]) {
      for (const auto& t : dist) m = std::min(m, t.probability);
    }
  }
  return m;
}

std::size_t ExplicitMdp::index_of(const StateId& state) const {
  auto it = std::find(states.begin(), states.end(), state.encoding());
  if (it == states.end()) throw Error(ErrorCode::IndexOutOfRange, "unknown state " + state.encoding());
  return static_cast<std::size_t>(it - states.begin());
}

ExplicitMdpEnvironment::ExplicitMdpEnvironment(ExplicitMdp model, std::uint64_t seed)
    : actions_(model.action_labels), rng_(seed) {
  model.validate();
  min_probability_ = model.min_probability();
  current_ = model.initial;
  model_ = std::make_shared<const ExplicitMdp>(std::move(model));
}

StateId ExplicitMdpEnvironment::reset() {
  current_ = model_->initial;
  return current_state();
}

StepOutcome ExplicitMdpEnvironment::step(ActionId action) {
  if (!actions_.contains(action)) {
    throw Error(ErrorCode::InvalidAction, "explicit MDP has no action index " + std::to_string(action.index));
  }
  if (is_terminal(model_->terminal_class[current_])) {
    throw Error(ErrorCode::EnvironmentState, "step called in terminal state " + model_->states[current_]);
  }
  const auto& dist = model_->transitions[current_][action.index];
  const Transition* chosen = &dist.back();
  if (dist.size() > 1) {
    double u = uniform01(rng_);
    for (const auto& t : dist) {
      if (u < t.probability) {
        chosen = &t;
        break;
      }
      u -= t.probability;
    }
  }
  current_ = chosen->next;
  return {current_state(), chosen->reward, model_->terminal_class[current_]};
}

Snapshot ExplicitMdpEnvironment::snapshot() const { return Snapshot(State{current_, rng_}); }

void ExplicitMdpEnvironment::restore(const Snapshot& token) {
  const auto* s = std::any_cast<State>(&token.payload());
  if (s == nullptr) throw Error(ErrorCode::SnapshotUnsupported, "snapshot was not produced by an explicit MDP");
  current_ = s->current;
  rng_ = s->rng;
}

std::unique_ptr<Environment> ExplicitMdpEnvironment::clone() const {
  return std::make_unique<ExplicitMdpEnvironment>(*this);
}

ExplicitMdp fig2_model() {
  ExplicitMdp m;
  for (int i = 0; i <= 10; ++i) m.states.push_back("s" + std::to_string(i));
  m.action_labels = {"a", "b"};
  m.initial = 0;
  m.terminal_class.assign(11, TerminalClass::NonTerminal);
  m.terminal_class[4] = TerminalClass::Unsafe;
  m.terminal_class[5] = TerminalClass::Unsafe;
  m.terminal_class[9] = TerminalClass::Unsafe;
  m.terminal_class[10] = TerminalClass::Goal;
  m.transitions.assign(11, {});
  auto edge = [&](std::size_t from, std::size_t via_a, std::size_t via_b) {
    auto reward = [&](std::size_t to) { return m.terminal_class[to] == TerminalClass::Goal ? 1.0 : 0.0; };
    m.transitions[from] = {{{1.0, via_a, reward(via_a)}}, {{1.0, via_b, reward(via_b)}}};
  };
  // Dead ends s2 and s8 loop on themselves under a; everything they can
  // reach leads into an unsafe state.
  edge(0, 1, 0);
  edge(1, 2, 6);
  edge(2, 2, 3);
  edge(3, 4, 5);
  edge(6, 7, 6);
  edge(7, 8, 10);
  edge(8, 8, 9);
  return m;
}

std::unique_ptr<Environment> fig2_mdp() { return std::make_unique<ExplicitMdpEnvironment>(fig2_model(), 0); }

}  // namespace rltb
