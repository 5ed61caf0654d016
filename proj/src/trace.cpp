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

#include "rltb/trace.hpp"


#include "rltb/error.hpp"

namespace rltb {

std::string_view to_string(TerminalClass c) {
  switch (c) {
    case TerminalClass::NonTerminal: return "none";
    case TerminalClass::Goal: return "goal";
    case TerminalClass::Unsafe: return "unsafe";
  }
  return "none";
}

TerminalClass terminal_class_from_string(std::string_view text) {
  if (text == "none") return TerminalClass::NonTerminal;
  if (text == "goal") return TerminalClass::Goal;
  if (text == "unsafe") return TerminalClass::Unsafe;
  throw Error(ErrorCode::ParseError, "unknown terminal class '" + std::string(text) + "'");
}

ActionSet::ActionSet(std::vector<std::string> labels) : labels_(std::move(labels)) {}

const std::string& ActionSet::label(ActionId a) const {
  if (!contains(a)) {
    throw Error(ErrorCode::InvalidAction, "action index " + std::to_string(a.index) +
                                              " outside action set of size " +
                                              std::to_string(labels_.size()));
  }
  return labels_[a.index];
}

std::optional<ActionId> ActionSet::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return ActionId{i};
  }
  return std::nullopt;
}

ActionId ActionSet::at(std::string_view label) const {
  if (auto a = find(label)) return *a;
  throw Error(ErrorCode::InvalidAction, "unknown action label '" + std::string(label) + "'");
}

std::vector<ActionId> ActionSet::all() const {
  std::vector<ActionId> out;
  out.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) out.push_back(ActionId{i});
  return out;
}

Trace::Trace(StateId initial_state, std::vector<Step> steps) : initial_state_(std::move(initial_state)) {
  steps_.reserve(steps.size());
  for (auto& s : steps) push(std::move(s));
}

const StateId& Trace::state_at(std::size_t i) const {
  if (i > steps_.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "state index " + std::to_string(i) + " beyond trace length " + std::to_string(steps_.size()));
  }
  return i == 0 ? initial_state_ : steps_[i - 1].state;
}

const StateId& Trace::final_state() const noexcept {
  return steps_.empty() ? initial_state_ : steps_.back().state;
}

TerminalClass Trace::final_terminal() const noexcept {
  return steps_.empty() ? TerminalClass::NonTerminal : steps_.back().terminal;
}

void Trace::push(Step step) {
  if (!steps_.empty() && is_terminal(steps_.back().terminal)) {
    throw Error(ErrorCode::EnvironmentState, "cannot extend a trace past its terminal step");
  }
  steps_.push_back(std::move(step));
}

ActionTrace Trace::action_trace() const {
  ActionTrace out;
  out.actions.reserve(steps_.size());
  for (const auto& s : steps_) out.actions.push_back(s.action);
  return out;
}

Trace run_actions(Environment& env, std::span<const ActionId> actions) {
  Trace trace(env.current_state());
  if (is_terminal(env.current_terminal())) return trace;
  const ActionSet& action_set = env.action_set();
  for (ActionId a : actions) {
    if (!action_set.contains(a)) {
      throw Error(ErrorCode::InvalidAction, "action index " + std::to_string(a.index) + " out of range");
    }
    StepOutcome out = env.step(a);
    const bool stop = is_terminal(out.terminal);
    trace.push(Step{a, out.reward, std::move(out.state), out.terminal});
    if (stop) break;
  }
  return trace;
}

Trace exec_action_trace(Environment& env, const ActionTrace& actions) {
  env.reset();
  return run_actions(env, actions.actions);
}

Trace run_policy(Environment& env, Policy& policy, std::size_t max_steps) {
  Trace trace(env.current_state());
  if (is_terminal(env.current_terminal())) return trace;
  const ActionSet& action_set = env.action_set();
  for (std::size_t t = 0; t < max_steps; ++t) {
    const ActionId a = policy.act(trace.final_state());
    if (!action_set.contains(a)) {
      throw Error(ErrorCode::InvalidAction,
                  "policy returned action index " + std::to_string(a.index) + " outside the action set");
    }
    StepOutcome out = env.step(a);
    const bool stop = is_terminal(out.terminal);
    trace.push(Step{a, out.reward, std::move(out.state), out.terminal});
    if (stop) break;
  }
  return trace;
}

Trace exec_policy(Environment& env, Policy& policy, std::size_t max_steps) {
  if (max_steps == 0) throw Error(ErrorCode::DomainError, "max_steps must be at least 1");
  env.reset();
  return run_policy(env, policy, max_steps);
}

Trace prefix(const Trace& trace, std::size_t i) {
  if (i > trace.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "prefix length " + std::to_string(i) + " beyond trace length " + std::to_string(trace.size()));
  }
  return Trace(trace.initial_state(), {trace.steps().begin(), trace.steps().begin() + static_cast<std::ptrdiff_t>(i)});
}

Trace suffix(const Trace& trace, std::size_t i) {
  if (i > trace.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "suffix start " + std::to_string(i) + " beyond trace length " + std::to_string(trace.size()));
  }
  return Trace(trace.state_at(i), {trace.steps().begin() + static_cast<std::ptrdiff_t>(i), trace.steps().end()});
}

ActionTrace prefix(const ActionTrace& trace, std::size_t i) {
  if (i > trace.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "prefix length " + std::to_string(i) + " beyond action trace length " +
                                                std::to_string(trace.size()));
  }
  return ActionTrace{{trace.actions.begin(), trace.actions.begin() + static_cast<std::ptrdiff_t>(i)}};
}

ActionTrace suffix(const ActionTrace& trace, std::size_t i) {
  if (i > trace.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "suffix start " + std::to_string(i) + " beyond action trace length " +
                                                std::to_string(trace.size()));
  }
  return ActionTrace{{trace.actions.begin() + static_cast<std::ptrdiff_t>(i), trace.actions.end()}};
}

ActionTrace concat(const ActionTrace& head, const ActionTrace& tail) {
  ActionTrace out = head;
  out.actions.insert(out.actions.end(), tail.actions.begin(), tail.actions.end());
  return out;
}

double accumulated_reward(const Trace& trace) {
  double total = 0.0;
  for (const auto& s : trace.steps()) total += s.reward;
  return total;
}

std::optional<std::size_t> depth_of_first_visit(const Trace& trace, const StateId& state) {
  for (std::size_t i = 0; i <= trace.size(); ++i) {
    if (trace.state_at(i) == state) return i;
  }
  return std::nullopt;
}

std::vector<StateId> state_sequence(const Trace& trace) {
  std::vector<StateId> out;
  out.reserve(trace.size() + 1);
  out.push_back(trace.initial_state());
  for (const auto& s : trace.steps()) out.push_back(s.state);
  return out;
}

}  // namespace rltb
