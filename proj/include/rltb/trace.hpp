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

#include <any>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rltb {

/// Opaque, environment-defined state identifier. The library only compares
/// and hashes encodings; it never interprets them.
class StateId {
 public:
  StateId() = default;
  explicit StateId(std::string encoding) : encoding_(std::move(encoding)) {}

  const std::string& encoding() const noexcept { return encoding_; }

  friend bool operator==(const StateId&, const StateId&) = default;
  friend auto operator<=>(const StateId&, const StateId&) = default;

 private:
  std::string encoding_;
};

/// Index into an environment's action list.
struct ActionId {
  std::size_t index = 0;

  friend bool operator==(const ActionId&, const ActionId&) = default;
  friend auto operator<=>(const ActionId&, const ActionId&) = default;
};

enum class TerminalClass { NonTerminal, Goal, Unsafe };

constexpr bool is_terminal(TerminalClass c) { return c != TerminalClass::NonTerminal; }

// "none" | "goal" | "unsafe"
std::string_view to_string(TerminalClass c);
TerminalClass terminal_class_from_string(std::string_view text);

struct Step {
  ActionId action;
  double reward = 0.0;
  StateId state;
  TerminalClass terminal = TerminalClass::NonTerminal;

  friend bool operator==(const Step&, const Step&) = default;
};

/// Ordered action labels of an environment.
class ActionSet {
 public:
  ActionSet() = default;
  explicit ActionSet(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  bool contains(ActionId a) const noexcept { return a.index < labels_.size(); }
  const std::string& label(ActionId a) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<ActionId> find(std::string_view label) const;
  // Throws InvalidAction for an unknown label.
  ActionId at(std::string_view label) const;

  std::vector<ActionId> all() const;

 private:
  std::vector<std::string> labels_;
};

struct ActionTrace {
  std::vector<ActionId> actions;

  std::size_t size() const noexcept { return actions.size(); }
  bool empty() const noexcept { return actions.empty(); }

  friend bool operator==(const ActionTrace&, const ActionTrace&) = default;
};

/// State-action-reward sequence rooted at an initial state. Only the last
/// step may be terminal.
class Trace {
 public:
  Trace() = default;
  explicit Trace(StateId initial_state) : initial_state_(std::move(initial_state)) {}
  Trace(StateId initial_state, std::vector<Step> steps);

  const StateId& initial_state() const noexcept { return initial_state_; }
  const std::vector<Step>& steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_.size(); }
  bool empty() const noexcept { return steps_.empty(); }

  // τ[i]; i in [0, size()].
  const StateId& state_at(std::size_t i) const;
  const StateId& final_state() const noexcept;
  TerminalClass final_terminal() const noexcept;

  // Throws EnvironmentState when appending after a terminal step.
  void push(Step step);

  ActionTrace action_trace() const;

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  StateId initial_state_;
  std::vector<Step> steps_;
};

struct StepOutcome {
  StateId state;
  double reward = 0.0;
  TerminalClass terminal = TerminalClass::NonTerminal;
};

/// Opaque token produced by Environment::snapshot().
class Snapshot {
 public:
  Snapshot() = default;
  explicit Snapshot(std::any payload) : payload_(std::move(payload)) {}

  const std::any& payload() const noexcept { return payload_; }

 private:
  std::any payload_;
};

/// Black-box sampling interface over an MDP with terminal states.
///
/// Handles are single-owner. Parallel workloads obtain one handle per worker
/// through clone(). Randomness comes from a per-handle stream that callers
/// reposition with reseed(); reset() does not touch it.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const ActionSet& action_set() const = 0;
  virtual StateId reset() = 0;
  // Throws InvalidAction for an unknown action and EnvironmentState when the
  // current state is terminal.
  virtual StepOutcome step(ActionId action) = 0;

  virtual StateId current_state() const = 0;
  virtual TerminalClass current_terminal() const = 0;

  virtual bool supports_snapshot() const { return true; }
  virtual Snapshot snapshot() const = 0;
  virtual void restore(const Snapshot& token) = 0;

  // Smallest nonzero transition probability, in (0, 1].
  virtual double min_transition_probability() const = 0;

  virtual void reseed(std::uint64_t seed) = 0;
  virtual std::unique_ptr<Environment> clone() const = 0;
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual ActionId act(const StateId& state) = 0;
  // Stochastic policies reposition their stream; deterministic ones ignore it.
  virtual void reseed(std::uint64_t /*seed*/) {}
  virtual std::unique_ptr<Policy> clone() const = 0;
};

/// Executes actions from the environment's current state, stopping at the
/// first terminal state. Remaining actions are dropped.
Trace run_actions(Environment& env, std::span<const ActionId> actions);

/// exec_τ(τ_A, s0): reset, then run_actions.
Trace exec_action_trace(Environment& env, const ActionTrace& actions);

/// Applies the policy from the current state until terminal or max_steps.
Trace run_policy(Environment& env, Policy& policy, std::size_t max_steps);

/// exec_π(π, s0): reset, then run_policy. max_steps must be >= 1.
Trace exec_policy(Environment& env, Policy& policy, std::size_t max_steps);

// τ^{-i} and τ^{+i}. Throw IndexOutOfRange when i > |τ|.
Trace prefix(const Trace& trace, std::size_t i);
Trace suffix(const Trace& trace, std::size_t i);
ActionTrace prefix(const ActionTrace& trace, std::size_t i);
ActionTrace suffix(const ActionTrace& trace, std::size_t i);

ActionTrace concat(const ActionTrace& head, const ActionTrace& tail);

/// Undiscounted sum of step rewards.
double accumulated_reward(const Trace& trace);

/// Smallest i with τ[i] == state.
std::optional<std::size_t> depth_of_first_visit(const Trace& trace, const StateId& state);

/// States τ[0..n] in order, with repetitions.
std::vector<StateId> state_sequence(const Trace& trace);

}  // namespace rltb

template <>
struct std::hash<rltb::StateId> {
  std::size_t operator()(const rltb::StateId& s) const noexcept {
    return std::hash<std::string>{}(s.encoding());
  }
};
