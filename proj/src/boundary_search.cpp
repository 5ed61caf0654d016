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

#include "rltb/boundary_search.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

#include "rltb/random.hpp"

namespace rltb {

namespace {

bool covered(double confidence, double p, std::size_t n) {
  return 1.0 - std::pow(1.0 - p, static_cast<double>(n)) >= confidence;
}

// One entered state on the DFS stack. `via` is the step that entered it.
struct Frame {
  StateId abstract;
  std::optional<Step> via;
  Snapshot token;
  std::size_t action_pos = 0;
  std::size_t sample = 0;
  bool saw_explored_child = false;
};

}  // namespace

std::size_t repetitions(double confidence, double min_probability) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::DomainError, "confidence must lie strictly between 0 and 1");
  }
  if (!(min_probability > 0.0 && min_probability <= 1.0)) {
    throw Error(ErrorCode::DomainError, "minimum transition probability must lie in (0, 1]");
  }
  if (min_probability == 1.0) return 1;
  const double estimate = std::log1p(-confidence) / std::log1p(-min_probability);
  auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(estimate)));
  // The closed form can land one off when the ratio is (nearly) integral.
  while (n > 1 && covered(confidence, min_probability, n - 1)) --n;
  while (!covered(confidence, min_probability, n)) ++n;
  return n;
}

void SearchConfig::validate() const {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "confidence must lie strictly between 0 and 1");
  }
  if (explicit_repetitions && *explicit_repetitions < 1) {
    throw Error(ErrorCode::ConfigInvalid, "explicit repetitions must be at least 1");
  }
  if (max_visits < 1) throw Error(ErrorCode::ConfigInvalid, "max_visits must be at least 1");
}

SearchExhausted::SearchExhausted(const std::string& message, std::set<StateId> explored, std::size_t visits)
    : Error(ErrorCode::SearchExhausted, message), explored_(std::move(explored)), visits_(visits) {}

SearchResult search_reference(Environment& env, const SearchConfig& config) {
  config.validate();
  if (!env.supports_snapshot()) {
    throw Error(ErrorCode::SnapshotUnsupported, "boundary search needs snapshot/restore");
  }
  std::vector<ActionId> order = config.action_order.empty() ? env.action_set().all() : config.action_order;
  for (ActionId a : order) {
    if (!env.action_set().contains(a)) {
      throw Error(ErrorCode::InvalidAction, "action order names index " + std::to_string(a.index));
    }
  }
  const std::size_t rep =
      config.explicit_repetitions.value_or(repetitions(config.confidence, env.min_transition_probability()));
  auto abstract = [&](const StateId& s) { return config.abstraction ? config.abstraction(s) : s; };

  Rng rng(config.seed);
  SearchResult result;
  result.repetitions = rep;

  const StateId root = env.reset();
  std::unordered_set<StateId> visited{abstract(root)};
  std::size_t visits = 1;
  std::vector<Frame> stack;

  // Entry into the state the environment currently occupies.
  auto enter = [&](std::optional<Step> via) {
    const StateId concrete = via ? via->state : root;
    const TerminalClass terminal = via ? via->terminal : env.current_terminal();
    StateId id = abstract(concrete);
    if (terminal == TerminalClass::Unsafe) {
      result.explored.insert(std::move(id));
      return;
    }
    stack.push_back(Frame{std::move(id), std::move(via), Snapshot{}, 0, 0, false});
    if (terminal == TerminalClass::Goal) {
      result.success = true;
      return;
    }
    stack.back().token = env.snapshot();
  };

  enter(std::nullopt);

  while (!result.success && !stack.empty()) {
    Frame& top = stack.back();
    if (top.action_pos == order.size()) {
      // Fully backtracked without reaching a goal.
      result.explored.insert(top.abstract);
      stack.pop_back();
      if (!stack.empty()) stack.back().saw_explored_child = true;
      continue;
    }
    const ActionId action = order[top.action_pos];
    if (++top.sample == rep) {
      ++top.action_pos;
      top.sample = 0;
    }
    env.restore(top.token);
    env.reseed(rng());
    StepOutcome out = env.step(action);
    if (!visited.insert(abstract(out.state)).second) continue;
    if (++visits > config.max_visits) {
      throw SearchExhausted("visit budget of " + std::to_string(config.max_visits) + " states exhausted",
                            std::move(result.explored), visits - 1);
    }
    const std::size_t parent = stack.size() - 1;
    const bool unsafe = out.terminal == TerminalClass::Unsafe;
    enter(Step{action, out.reward, std::move(out.state), out.terminal});
    if (unsafe) stack[parent].saw_explored_child = true;
  }
  result.visits = visits;

  if (!result.success) {
    throw SearchExhausted("search returned without reaching a goal state", std::move(result.explored), visits);
  }

  result.reference_trace = Trace(root);
  for (std::size_t depth = 0; depth < stack.size(); ++depth) {
    const Frame& f = stack[depth];
    if (f.via) result.reference_trace.push(*f.via);
    if (f.saw_explored_child) {
      result.boundary_states.push_back(result.reference_trace.final_state());
      result.boundary_depths.push_back(depth);
    }
  }
  return result;
}

}  // namespace rltb
