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
#include <memory>
#include <string>
#include <vector>

#include "rltb/random.hpp"
#include "rltb/trace.hpp"

namespace rltb {

struct Transition {
  double probability = 1.0;
  std::size_t next = 0;
  double reward = 0.0;
};

/// Finite MDP given by explicit tables. transitions[s][a] lists the outcome
/// distribution of action a in state s; terminal states need no entries.
struct ExplicitMdp {
  std::vector<std::string> states;
  std::size_t initial = 0;
  std::vector<std::string> action_labels;
  std::vector<std::vector<std::vector<Transition>>> transitions;
  std::vector<TerminalClass> terminal_class;

  // Throws ConfigInvalid.
  void validate() const;
  double min_probability() const;
  std::size_t index_of(const StateId& state) const;
};

class ExplicitMdpEnvironment final : public Environment {
 public:
  ExplicitMdpEnvironment(ExplicitMdp model, std::uint64_t seed);

  const ActionSet& action_set() const override { return actions_; }
  StateId reset() override;
  StepOutcome step(ActionId action) override;
  StateId current_state() const override { return StateId(model_->states[current_]); }
  TerminalClass current_terminal() const override { return model_->terminal_class[current_]; }
  Snapshot snapshot() const override;
  void restore(const Snapshot& token) override;
  double min_transition_probability() const override { return min_probability_; }
  void reseed(std::uint64_t seed) override { rng_.seed(seed); }
  std::unique_ptr<Environment> clone() const override;

  const ExplicitMdp& model() const noexcept { return *model_; }

 private:
  struct State {
    std::size_t current;
    Rng rng;
  };

  std::shared_ptr<const ExplicitMdp> model_;
  ActionSet actions_;
  double min_probability_ = 1.0;
  std::size_t current_ = 0;
  Rng rng_;
};

/// The eleven-state, two-action deterministic MDP of the search walkthrough:
/// states s0..s10, actions {a, b}, unsafe {s4, s5, s9}, goal s10. The goal
/// pays +1, every other transition 0.
ExplicitMdp fig2_model();
std::unique_ptr<Environment> fig2_mdp();

}  // namespace rltb
