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

#include <gtest/gtest.h>

#include <functional>
#include <string>
#include <vector>

#include "rltb/error.hpp"
#include "rltb/gridworld.hpp"
#include "rltb/trace.hpp"

namespace rltb::testing {

inline ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected rltb::Error";
  return ErrorCode::ParseError;
}

#define EXPECT_RLTB_ERROR(stmt, expected) EXPECT_EQ(::rltb::testing::code_of([&] { stmt; }), (expected))

inline ActionTrace actions(std::initializer_list<std::size_t> indices) {
  ActionTrace t;
  for (std::size_t i : indices) t.actions.push_back(ActionId{i});
  return t;
}

// 5x5, start (0,0), goal (4,4), no obstacles.
inline GridworldConfig open_grid() { return GridworldConfig{}; }

// Row y=1 is a pit except for its last cell, so the top row is a ledge.
inline GridworldConfig cliff_grid() {
  GridworldConfig c;
  c.pit_cells = {{0, 1}, {1, 1}, {2, 1}, {3, 1}};
  return c;
}

inline GridworldConfig two_pit_grid() {
  GridworldConfig c;
  c.pit_cells = {{2, 1}, {2, 3}};
  return c;
}

}  // namespace rltb::testing

#include <random>

#include "rltb/boundary_search.hpp"

namespace rltb::testing {

// A successful SearchResult over a synthetic trace of length in [1, max_length]
// with a random strictly increasing set of boundary depths below its end.
inline SearchResult random_search_result(std::mt19937_64& rng, std::size_t action_count, std::size_t max_length = 30) {
  SearchResult r;
  const std::size_t length = 1 + rng() % max_length;
  Trace t(StateId("t0"));
  for (std::size_t i = 1; i <= length; ++i) {
    t.push({ActionId{rng() % action_count}, 0.0, StateId("t" + std::to_string(i)),
            i == length ? TerminalClass::Goal : TerminalClass::NonTerminal});
  }
  for (std::size_t d = 0; d < length; ++d) {
    if (rng() % 3 == 0) {
      r.boundary_depths.push_back(d);
      r.boundary_states.push_back(t.state_at(d));
    }
  }
  r.reference_trace = std::move(t);
  r.success = true;
  return r;
}

}  // namespace rltb::testing
