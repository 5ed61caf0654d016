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
#include <optional>
#include <span>
#include <vector>

#include "rltb/trace.hpp"

namespace rltb {

struct PerfParams {
  std::size_t n_ep = 10;
  std::size_t n_test = 10;
  std::size_t step_width = 20;
  std::size_t max_episode_steps = 200;
  std::uint64_t seed = 0;
  // Failed prefix executions tolerated per prefix length, as a multiple of
  // n_test.
  std::size_t retry_factor = 10;
  std::size_t jobs = 1;

  void validate() const;
};

struct SimplePerformance {
  double trace_return = 0.0;  // R_t
  double agent_return = 0.0;  // R_a
};

struct PerfEntry {
  double trace_return = 0.0;  // R_t^pl
  double agent_return = 0.0;  // R_a^pl
  std::size_t n_tests_run = 0;
};

// Bookkeeping for a single robust-performance test.
struct PerfTestRecord {
  std::size_t prefix_length = 0;
  std::size_t test_index = 0;
  std::size_t trace_index = 0;
  std::size_t failed_attempts = 0;
  double prefix_reward = 0.0;        // R⁻
  double trace_suffix_return = 0.0;  // EvalTraces({τ^{+pl}}, s_pl)
  double agent_suffix_return = 0.0;  // EvalAgent(π, s_pl)
};

struct PerfReport {
  std::optional<SimplePerformance> simple;
  std::map<std::size_t, PerfEntry> robust;
  std::vector<PerfTestRecord> tests;
};

// Where an evaluation starts: a snapshot, or the initial state when empty.
using StartState = std::optional<Snapshot>;

/// Mean accumulated reward of executing each trace n_ep times from `start`.
/// Episode e runs on the stream derived from (seed, e) for every trace.
/// Throws EmptyTraceSet.
double eval_traces(Environment& env, std::span<const ActionTrace> traces, const StartState& start,
                   std::size_t n_ep, std::uint64_t seed);

/// Mean accumulated reward of n_ep policy episodes from `start`, each cut at
/// max_episode_steps. Episode e uses the same environment stream as
/// eval_traces with the same seed.
double eval_agent(Environment& env, Policy& policy, const StartState& start, std::size_t n_ep,
                  std::size_t max_episode_steps, std::uint64_t seed);

/// Agent versus fuzz traces from the initial state.
SimplePerformance simple_performance(Environment& env, Policy& policy, std::span<const ActionTrace> traces,
                                     const PerfParams& params);

/// Robust performance over fuzz-trace prefixes of length w, 2w, ... while at
/// least n_test traces are that long. Each test draws a qualifying trace,
/// replays its prefix (retrying with a fresh draw if the replay terminates
/// early), snapshots s_pl and evaluates both the trace suffix and the agent
/// from there, adding the prefix reward to each. Test i at prefix length pl
/// uses streams derived from (seed, pl, i).
PerfReport robust_performance(Environment& env, Policy& policy, std::span<const ActionTrace> traces,
                              const PerfParams& params);

}  // namespace rltb
