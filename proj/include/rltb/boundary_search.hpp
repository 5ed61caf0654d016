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
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "rltb/error.hpp"
#include "rltb/trace.hpp"

namespace rltb {

/// Samples per action needed to observe every successor of probability at
/// least p with confidence c: the smallest n >= 1 with 1 - (1-p)^n >= c.
/// Throws DomainError unless 0 < c < 1 and 0 < p <= 1.
std::size_t repetitions(double confidence, double min_probability);

struct SearchConfig {
  double confidence = 0.9;
  // Overrides repetitions(confidence, p) when set; must be >= 1.
  std::optional<std::size_t> explicit_repetitions;
  // Order in which actions are tried; empty means the environment's order.
  std::vector<ActionId> action_order;
  // Optional state abstraction. Visited and explored bookkeeping uses the
  // abstract identifiers; traces keep the concrete ones.
  std::function<StateId(const StateId&)> abstraction;
  // Maximum number of states the search may enter.
  std::size_t max_visits = 1'000'000;
  // Stream for resampling after each restore in stochastic environments.
  std::uint64_t seed = 0;

  void validate() const;
};

struct SearchResult {
  Trace reference_trace;
  std::vector<StateId> boundary_states;
  std::vector<std::size_t> boundary_depths;
  std::set<StateId> explored;
  bool success = false;
  std::size_t repetitions = 1;
  std::size_t visits = 0;
};

class SearchExhausted : public Error {
 public:
  SearchExhausted(const std::string& message, std::set<StateId> explored, std::size_t visits);

  const std::set<StateId>& explored() const noexcept { return explored_; }
  std::size_t visits() const noexcept { return visits_; }

 private:
  std::set<StateId> explored_;
  std::size_t visits_;
};

/// Backtracking depth-first search for a goal-reaching reference trace.
///
/// From every entered state each action is sampled `rep` times, restoring the
/// state's snapshot before every sample. Successors not yet visited are
/// entered recursively; visited states are never re-entered. Unsafe states
/// and states whose subtrees fail to reach a goal are marked explored. On
/// success the reference trace is the current root-to-goal path, and a path
/// state is a boundary state iff at least one successor it entered ended up
/// explored.
///
/// Throws SearchExhausted when no goal is found or max_visits is reached, and
/// SnapshotUnsupported for environments without snapshots.
SearchResult search_reference(Environment& env, const SearchConfig& config);

}  // namespace rltb
