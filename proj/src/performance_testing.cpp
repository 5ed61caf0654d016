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

#include "rltb/performance_testing.hpp"

#include <algorithm>
#include <memory>

#include "rltb/error.hpp"
#include "rltb/parallel.hpp"
#include "rltb/random.hpp"

namespace rltb {

namespace {

void go_to_start(Environment& env, const StartState& start) {
  if (start) {
    env.restore(*start);
  } else {
    env.reset();
  }
}

}  // namespace

void PerfParams::validate() const {
  if (n_ep < 1 || n_test < 1 || step_width < 1 || max_episode_steps < 1) {
    throw Error(ErrorCode::DomainError, "n_ep, n_test, step width and max episode steps must be at least 1");
  }
}

double eval_traces(Environment& env, std::span<const ActionTrace> traces, const StartState& start,
                   std::size_t n_ep, std::uint64_t seed) {
  if (traces.empty()) throw Error(ErrorCode::EmptyTraceSet, "no traces to evaluate");
  if (n_ep < 1) throw Error(ErrorCode::DomainError, "n_ep must be at least 1");
  double total = 0.0;
  for (const auto& trace : traces) {
    for (std::size_t e = 0; e < n_ep; ++e) {
      go_to_start(env, start);
      env.reseed(derive_seed(seed, {e}));
      total += accumulated_reward(run_actions(env, trace.actions));
    }
  }
  return total / static_cast<double>(n_ep * traces.size());
}

double eval_agent(Environment& env, Policy& policy, const StartState& start, std::size_t n_ep,
                  std::size_t max_episode_steps, std::uint64_t seed) {
  if (n_ep < 1) throw Error(ErrorCode::DomainError, "n_ep must be at least 1");
  double total = 0.0;
  for (std::size_t e = 0; e < n_ep; ++e) {
    go_to_start(env, start);
    env.reseed(derive_seed(seed, {e}));
    policy.reseed(derive_seed(seed, {e, 1}));
    total += accumulated_reward(run_policy(env, policy, max_episode_steps));
  }
  return total / static_cast<double>(n_ep);
}

SimplePerformance simple_performance(Environment& env, Policy& policy, std::span<const ActionTrace> traces,
                                     const PerfParams& params) {
  params.validate();
  return {eval_traces(env, traces, std::nullopt, params.n_ep, params.seed),
          eval_agent(env, policy, std::nullopt, params.n_ep, params.max_episode_steps, params.seed)};
}

PerfReport robust_performance(Environment& env, Policy& policy, std::span<const ActionTrace> traces,
                              const PerfParams& params) {
  params.validate();
  if (traces.empty()) throw Error(ErrorCode::EmptyTraceSet, "robust performance testing needs fuzz traces");
  PerfReport report;

  const std::size_t workers = std::min(std::max<std::size_t>(params.jobs, 1), params.n_test);
  std::vector<std::unique_ptr<Environment>> envs;
  std::vector<std::unique_ptr<Policy>> policies;
  if (workers > 1) {
    for (std::size_t w = 0; w < workers; ++w) {
      envs.push_back(env.clone());
      policies.push_back(policy.clone());
    }
  }
  const std::size_t budget = params.retry_factor * params.n_test;

  for (std::size_t pl = params.step_width;; pl += params.step_width) {
    std::vector<std::size_t> qualifying;
    for (std::size_t k = 0; k < traces.size(); ++k) {
      if (traces[k].size() >= pl) qualifying.push_back(k);
    }
    if (qualifying.size() < params.n_test) break;

    std::vector<PerfTestRecord> records(params.n_test);
    parallel_for(params.n_test, workers, [&](std::size_t w, std::size_t i) {
      Environment& e = workers > 1 ? *envs[w] : env;
      Policy& p = workers > 1 ? *policies[w] : policy;
      Rng rng(derive_seed(params.seed, {pl, i}));
      PerfTestRecord rec{pl, i};
      for (std::size_t attempt = 0;; ++attempt) {
        rec.trace_index = qualifying[uniform_index(rng, qualifying.size())];
        const ActionTrace& chosen = traces[rec.trace_index];
        e.reset();
        e.reseed(derive_seed(params.seed, {pl, i, attempt, 0}));
        const Trace head = run_actions(e, std::span(chosen.actions).first(pl));
        if (head.size() == pl) {
          rec.prefix_reward = accumulated_reward(head);
          break;
        }
        rec.failed_attempts = attempt + 1;
        if (rec.failed_attempts > budget) {
          throw Error(ErrorCode::RetryBudgetExceeded,
                      "prefix replays of length " + std::to_string(pl) + " keep terminating early");
        }
      }
      const StartState start = e.snapshot();
      const ActionTrace tail = suffix(traces[rec.trace_index], pl);
      const std::uint64_t eval_seed = derive_seed(params.seed, {pl, i, 1});
      rec.trace_suffix_return = eval_traces(e, std::span(&tail, 1), start, params.n_ep, eval_seed);
      rec.agent_suffix_return = eval_agent(e, p, start, params.n_ep, params.max_episode_steps, eval_seed);
      records[i] = rec;
    });

    std::size_t failures = 0;
    PerfEntry entry;
    for (const auto& rec : records) {
      failures += rec.failed_attempts;
      entry.trace_return += rec.prefix_reward + rec.trace_suffix_return;
      entry.agent_return += rec.prefix_reward + rec.agent_suffix_return;
    }
    if (failures > budget) {
      throw Error(ErrorCode::RetryBudgetExceeded,
                  std::to_string(failures) + " early-terminating prefix replays at length " + std::to_string(pl));
    }
    entry.trace_return /= static_cast<double>(params.n_test);
    entry.agent_return /= static_cast<double>(params.n_test);
    entry.n_tests_run = params.n_test;
    report.robust.emplace(pl, entry);
    report.tests.insert(report.tests.end(), records.begin(), records.end());
  }
  return report;
}

}  // namespace rltb
