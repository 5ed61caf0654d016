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

#include <gtest/gtest.h>

#include "rltb/boundary_search.hpp"
#include "rltb/explicit_mdp.hpp"
#include "rltb/gridworld.hpp"
#include "rltb/performance_testing.hpp"
#include "rltb/policies.hpp"
#include "rltb/qlearning.hpp"
#include "rltb/trace_fuzzer.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace rltb {
namespace {

using testing::actions;

// s --a--> t (reward 10) and s --b--> u (reward 20); both goals.
ExplicitMdpEnvironment fork_env() {
  ExplicitMdp m;
  m.states = {"s", "t", "u"};
  m.action_labels = {"a", "b"};
  m.terminal_class = {TerminalClass::NonTerminal, TerminalClass::Goal, TerminalClass::Goal};
  m.transitions = {{{{1.0, 1, 10.0}}, {{1.0, 2, 20.0}}}, {}, {}};
  return ExplicitMdpEnvironment(m, 0);
}

std::vector<ActionTrace> fuzzed(const GridworldConfig& c, std::size_t generations, std::uint64_t seed) {
  Gridworld env(c, 0);
  const ActionTrace ref = search_reference(env, {}).reference_trace.action_trace();
  FuzzParams p;
  p.generations = generations;
  p.population_size = 20;
  p.seed = seed;
  return fuzz_traces(env, ref, p).fittest_traces();
}

TEST(EvalTracesTest, DeterministicSingleTraceIgnoresEpisodes) {
  Gridworld env(testing::open_grid(), 0);
  const std::vector<ActionTrace> t{actions({0, 0, 1, 1, 0})};
  const double expected = accumulated_reward(exec_action_trace(env, t[0]));
  EXPECT_DOUBLE_EQ(eval_traces(env, t, std::nullopt, 1, 3), expected);
  EXPECT_DOUBLE_EQ(eval_traces(env, t, std::nullopt, 7, 3), expected);
}

TEST(EvalTracesTest, MeanOverTraces) {
  auto env = fork_env();
  const std::vector<ActionTrace> t{actions({0}), actions({1})};
  EXPECT_DOUBLE_EQ(eval_traces(env, t, std::nullopt, 4, 0), 15.0);
  EXPECT_RLTB_ERROR(eval_traces(env, {}, std::nullopt, 4, 0), ErrorCode::EmptyTraceSet);
}

TEST(EvalTracesTest, GoalTraceMatchesReplaySum) {
  const GridworldConfig c = testing::two_pit_grid();
  Gridworld env(c, 0);
  const ActionTrace ref = search_reference(env, {}).reference_trace.action_trace();
  double replay = 0.0;
  Gridworld probe(c, 0);
  probe.reset();
  for (ActionId a : ref.actions) replay += probe.step(a).reward;
  EXPECT_EQ(probe.current_terminal(), TerminalClass::Goal);
  EXPECT_DOUBLE_EQ(eval_traces(env, std::vector{ref}, std::nullopt, 3, 1), replay);
}

TEST(EvalTracesTest, StartsFromSnapshot) {
  Gridworld env(testing::open_grid(), 0);
  env.reset();
  env.step(Gridworld::kRight);
  const Snapshot s = env.snapshot();
  const std::vector<ActionTrace> t{actions({0, 0, 0})};
  // From (1,0) three rights end at (4,0): three ordinary steps.
  EXPECT_DOUBLE_EQ(eval_traces(env, t, s, 2, 0), -3.0);
}

TEST(EvalAgentTest, OptimalPolicyEarns93) {
  const GridworldConfig c = testing::open_grid();
  Gridworld env(c, 0);
  GridDistancePolicy pi(c, GridDistancePolicy::Target::GoalAvoidingPits);
  EXPECT_DOUBLE_EQ(eval_agent(env, pi, std::nullopt, 1, 200, 0), 93.0);
  EXPECT_DOUBLE_EQ(eval_agent(env, pi, std::nullopt, 10, 200, 0), 93.0);
}

TEST(EvalAgentTest, CappedEpisodes) {
  Gridworld env(testing::open_grid(), 0);
  ConstantPolicy up(Gridworld::kUp);
  EXPECT_DOUBLE_EQ(eval_agent(env, up, std::nullopt, 3, 12, 0), -12.0);
}

TEST(SimplePerformanceTest, ComparesFromInitialState) {
  auto env = fork_env();
  ConstantPolicy b(ActionId{1});
  PerfParams p;
  const SimplePerformance s = simple_performance(env, b, std::vector{actions({0})}, p);
  EXPECT_DOUBLE_EQ(s.trace_return, 10.0);
  EXPECT_DOUBLE_EQ(s.agent_return, 20.0);
}

TEST(RobustPerformanceTest, ShortTracesGiveEmptyReport) {
  Gridworld env(testing::open_grid(), 0);
  ConstantPolicy right(Gridworld::kRight);
  PerfParams p;
  p.n_test = 2;
  const std::vector<ActionTrace> t{actions({0, 1}), actions({1, 0, 0})};
  EXPECT_TRUE(robust_performance(env, right, t, p).robust.empty());
  EXPECT_RLTB_ERROR(robust_performance(env, right, {}, p), ErrorCode::EmptyTraceSet);
  p.step_width = 0;
  EXPECT_RLTB_ERROR(robust_performance(env, right, t, p), ErrorCode::DomainError);
}

TEST(RobustPerformanceTest, MatchesStraightLineOracle) {
  const GridworldConfig c = testing::two_pit_grid();
  Gridworld env(c, 0);
  QLearningParams qp;
  qp.episodes = 400;
  qp.seed = 3;
  QTablePolicy q = train_tabular_q(env, qp);
  const auto traces = fuzzed(c, 5, 8);
  PerfParams p;
  p.n_test = 3;
  p.n_ep = 4;
  p.step_width = 2;
  p.seed = 19;
  const PerfReport report = robust_performance(env, q, traces, p);
  const auto expected = oracle::straight_line_robust(env, q, traces, p);
  ASSERT_FALSE(expected.empty());
  ASSERT_EQ(report.robust.size(), expected.size());
  for (const auto& [pl, e] : expected) {
    ASSERT_TRUE(report.robust.contains(pl));
    EXPECT_NEAR(report.robust.at(pl).trace_return, e.trace_return, 1e-9);
    EXPECT_NEAR(report.robust.at(pl).agent_return, e.agent_return, 1e-9);
    EXPECT_EQ(report.robust.at(pl).n_tests_run, e.n_tests);
  }
}

TEST(RobustPerformanceTest, PrefixAndSuffixAddUp) {
  const GridworldConfig c = testing::two_pit_grid();
  Gridworld env(c, 0);
  ConstantPolicy down(Gridworld::kDown);
  const auto traces = fuzzed(c, 6, 2);
  PerfParams p;
  p.n_test = 2;
  p.step_width = 2;
  const PerfReport report = robust_performance(env, down, traces, p);
  ASSERT_FALSE(report.tests.empty());
  std::size_t expected_pl = p.step_width;
  for (const auto& [pl, entry] : report.robust) {
    EXPECT_EQ(pl, expected_pl);
    expected_pl += p.step_width;
  }
  for (const auto& rec : report.tests) {
    // On a deterministic grid the whole-trace replay equals prefix plus suffix.
    const Trace full = exec_action_trace(env, traces[rec.trace_index]);
    EXPECT_EQ(rec.prefix_reward + rec.trace_suffix_return, accumulated_reward(full));
    EXPECT_EQ(rec.prefix_reward, accumulated_reward(prefix(full, rec.prefix_length)));
  }
}

TEST(RobustPerformanceTest, StochasticResultsIgnoreJobCount) {
  GridworldConfig c = testing::two_pit_grid();
  c.slip_probability = 0.1;
  Gridworld env(c, 4);
  RandomPolicy pi(4, 6);
  const auto traces = fuzzed(testing::two_pit_grid(), 10, 5);
  PerfParams p;
  p.n_test = 4;
  p.step_width = 3;
  p.retry_factor = 50;
  const PerfReport one = robust_performance(env, pi, traces, p);
  p.jobs = 3;
  const PerfReport three = robust_performance(env, pi, traces, p);
  ASSERT_EQ(one.robust.size(), three.robust.size());
  for (const auto& [pl, e] : one.robust) {
    EXPECT_EQ(e.trace_return, three.robust.at(pl).trace_return);
    EXPECT_EQ(e.agent_return, three.robust.at(pl).agent_return);
  }
}

TEST(RobustPerformanceTest, RetryBudgetIsBounded) {
  GridworldConfig c;
  c.pit_cells = {{2, 0}};
  Gridworld env(c, 0);
  ConstantPolicy right(Gridworld::kRight);
  PerfParams p;
  p.n_test = 1;
  p.step_width = 5;
  // Every replay of this prefix enters the pit after two steps.
  const std::vector<ActionTrace> t{actions({0, 0, 0, 0, 0, 0})};
  EXPECT_RLTB_ERROR(robust_performance(env, right, t, p), ErrorCode::RetryBudgetExceeded);
}

}  // namespace
}  // namespace rltb
