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

#include <random>

#include "rltb/boundary_search.hpp"
#include "rltb/explicit_mdp.hpp"
#include "rltb/gridworld.hpp"
#include "rltb/trace_fuzzer.hpp"
#include "support/fixtures.hpp"

namespace rltb {
namespace {

using testing::actions;

EvaluatedTrace with_fitness(double f) {
  EvaluatedTrace e;
  e.fitness = f;
  return e;
}

EvaluatedTrace with_raw(double pos, double neg) {
  EvaluatedTrace e;
  e.r_pos_raw = pos;
  e.r_neg_raw = neg;
  return e;
}

ActionTrace grid_reference(const GridworldConfig& c) {
  Gridworld env(c, 0);
  return search_reference(env, {}).reference_trace.action_trace();
}

TEST(FitnessTest, Substitutions) {
  const FitnessWeights w;
  EXPECT_NEAR(fitness(1, 1, 0, w), 4.5, 1e-12);
  EXPECT_NEAR(fitness(0, 0, 1, w), 0.0, 1e-12);
  EXPECT_NEAR(fitness(0.5, 0.2, 0.4, w), 1.9, 1e-12);
}

TEST(FitnessTest, RejectsUnnormalizedTerms) {
  const FitnessWeights w;
  EXPECT_RLTB_ERROR(fitness(1.1, 0, 0, w), ErrorCode::DomainError);
  EXPECT_RLTB_ERROR(fitness(0, -0.1, 0, w), ErrorCode::DomainError);
  EXPECT_RLTB_ERROR(fitness(0, 0, 2, w), ErrorCode::DomainError);
}

TEST(FitnessTest, MonotoneInEachTerm) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const FitnessWeights w{3 * u(rng), 3 * u(rng), 3 * u(rng)};
    const double c = u(rng), p = u(rng), n = u(rng), d = u(rng) * 0.5;
    EXPECT_LE(fitness(c * 0.5, p, n, w), fitness(c * 0.5 + d, p, n, w) + 1e-12);
    EXPECT_LE(fitness(c, p * 0.5, n, w), fitness(c, p * 0.5 + d, n, w) + 1e-12);
    EXPECT_GE(fitness(c, p, n * 0.5, w), fitness(c, p, n * 0.5 + d, w) - 1e-12);
  }
}

TEST(CoverageTermTest, SelfNormalized) {
  EXPECT_EQ(coverage_term(4, 4), 1.0);
  EXPECT_EQ(coverage_term(0, 4), 0.0);
  EXPECT_EQ(coverage_term(0, 0), 0.0);
  EXPECT_EQ(coverage_term(1, 4), 0.25);
}

TEST(NormalizeRewardsTest, DividesByGenerationMaximum) {
  std::vector<EvaluatedTrace> g{with_raw(10, 25), with_raw(5, 50), with_raw(0, 0)};
  normalize_rewards(g);
  EXPECT_EQ(g[0].r_pos, 1.0);
  EXPECT_EQ(g[1].r_pos, 0.5);
  EXPECT_EQ(g[2].r_pos, 0.0);
  EXPECT_EQ(g[0].r_neg, 0.5);
  EXPECT_EQ(g[1].r_neg, 1.0);

  std::vector<EvaluatedTrace> zero{with_raw(1, 0), with_raw(2, 0)};
  normalize_rewards(zero);
  for (const auto& e : zero) EXPECT_EQ(e.r_neg, 0.0);
}

TEST(ApplyMutationTest, AppendKeepsPrefix) {
  Rng rng(1);
  const ActionTrace t = apply_mutation(actions({0}), MutationOperator::Append, 3, 2, rng);
  EXPECT_EQ(t.size(), 4u);
  EXPECT_EQ(t.actions[0], ActionId{0});
}

TEST(ApplyMutationTest, LengthArithmetic) {
  Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    ActionTrace t;
    const std::size_t n = 1 + rng() % 10;
    for (std::size_t k = 0; k < n; ++k) t.actions.push_back(ActionId{rng() % 3});
    const std::size_t x = 1 + rng() % 15;
    EXPECT_EQ(apply_mutation(t, MutationOperator::Insert, x, 3, rng).size(), n + x);
    EXPECT_EQ(apply_mutation(t, MutationOperator::Append, x, 3, rng).size(), n + x);
    EXPECT_EQ(apply_mutation(t, MutationOperator::Change, x, 3, rng).size(), n);
    const ActionTrace removed = apply_mutation(t, MutationOperator::Remove, x, 3, rng);
    EXPECT_GE(removed.size(), 1u);
    EXPECT_GE(removed.size() + x, n);
    for (auto op : {MutationOperator::Insert, MutationOperator::Remove, MutationOperator::Change,
                    MutationOperator::Append}) {
      for (ActionId a : apply_mutation(t, op, x, 3, rng).actions) EXPECT_LT(a.index, 3u);
    }
  }
  EXPECT_EQ(apply_mutation(actions({1}), MutationOperator::Remove, 5, 3, rng), actions({1}));
}

TEST(MutateTest, StopProbabilityOneMeansOneApplication) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(mutate(actions({0, 1}), 15, 1.0, 2, rng).applications, 1u);
}

TEST(MutateTest, MeanApplicationsIsGeometric) {
  Rng rng(derive_seed(2024, {}));
  double total = 0;
  const int runs = 10000;
  for (int i = 0; i < runs; ++i) total += static_cast<double>(mutate(actions({0, 1, 0}), 15, 0.2, 4, rng).applications);
  EXPECT_NEAR(total / runs, 5.0, 0.25);
}

TEST(MutateTest, RejectsBadParameters) {
  Rng rng(3);
  EXPECT_RLTB_ERROR(mutate(actions({0}), 0, 0.2, 2, rng), ErrorCode::DomainError);
  EXPECT_RLTB_ERROR(mutate(actions({0}), 3, 0.0, 2, rng), ErrorCode::DomainError);
}

TEST(CrossoverTest, Definition) {
  EXPECT_EQ(crossover_at(actions({0, 0, 0, 0}), actions({1, 1, 1, 1}), 2), actions({0, 0, 1, 1}));
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const ActionTrace same = actions({0, 1, 1, 0, 1});
    EXPECT_EQ(crossover(same, same, rng), same);
    ActionTrace a, b;
    const std::size_t na = 2 + rng() % 8, nb = 2 + rng() % 8;
    for (std::size_t k = 0; k < na; ++k) a.actions.push_back(ActionId{0});
    for (std::size_t k = 0; k < nb; ++k) b.actions.push_back(ActionId{1});
    const ActionTrace c = crossover(a, b, rng);
    EXPECT_EQ(c.size(), b.size());
    EXPECT_EQ(c.actions.front(), ActionId{0});
    EXPECT_EQ(c.actions.back(), ActionId{1});
  }
}

TEST(CrossoverTest, TooShortParents) {
  Rng rng(5);
  EXPECT_RLTB_ERROR(crossover(actions({0}), actions({1, 1}), rng), ErrorCode::TooShort);
}

TEST(SelectParentTest, ProportionalToFitness) {
  Rng rng(6);
  const std::vector<EvaluatedTrace> g{with_fitness(1), with_fitness(3)};
  int second = 0;
  for (int i = 0; i < 10000; ++i) second += select_parent(g, rng) == 1;
  EXPECT_NEAR(second / 10000.0, 0.75, 0.02);
}

TEST(SelectParentTest, ZeroFitnessIsUniform) {
  Rng rng(7);
  const std::vector<EvaluatedTrace> g{with_fitness(0), with_fitness(0), with_fitness(0), with_fitness(0)};
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 10000; ++i) ++counts[select_parent(g, rng)];
  for (int c : counts) EXPECT_NEAR(c / 10000.0, 0.25, 0.02);
  const std::vector<EvaluatedTrace> one{with_fitness(0.7)};
  for (int i = 0; i < 10; ++i) EXPECT_EQ(select_parent(one, rng), 0u);
}

TEST(FuzzTracesTest, MinimalRun) {
  Gridworld env(testing::two_pit_grid(), 0);
  FuzzParams p;
  p.generations = 1;
  p.population_size = 1;
  p.crossover_probability = 0.0;
  const ActionTrace ref = grid_reference(testing::two_pit_grid());
  const FuzzRun run = fuzz_traces(env, ref, p);
  ASSERT_EQ(run.per_generation.size(), 1u);
  EXPECT_EQ(run.fittest_traces().size(), 1u);
  EXPECT_EQ(run.initial.population.front().actions, ref);

  Rng rng(derive_seed(p.seed, {1, 0, 0}));
  select_parent(run.initial.population, rng);
  bernoulli(rng, p.crossover_probability);
  const ActionTrace expected = mutate(ref, p.mutation_effect_size, p.mutation_stop_probability, 4, rng).trace;
  EXPECT_EQ(run.per_generation[0].fittest().actions, expected);
}

TEST(FuzzTracesTest, DefaultParametersContracts) {
  const GridworldConfig c = testing::two_pit_grid();
  Gridworld env(c, 0);
  FuzzParams p;
  p.seed = 31;
  const ActionTrace ref = grid_reference(c);
  const FuzzRun run = fuzz_traces(env, ref, p);
  ASSERT_EQ(run.fittest_traces().size(), 50u);
  std::size_t previous = run.initial.coverage_after;
  for (const auto& gen : run.per_generation) {
    EXPECT_GE(gen.coverage_after, previous);
    previous = gen.coverage_after;
    ASSERT_EQ(gen.population.size(), 50u);
    for (std::size_t j = 0; j < gen.population.size(); ++j) {
      const auto& e = gen.population[j];
      for (double v : {e.coverage, e.r_pos, e.r_neg}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      EXPECT_GE(e.r_pos_raw, 0.0);
      EXPECT_GE(e.r_neg_raw, 0.0);
      EXPECT_GE(e.fitness, 0.0);
      EXPECT_LE(e.fitness, gen.fittest().fitness);
      if (e.fitness == gen.fittest().fitness) EXPECT_GE(j, gen.fittest_index);
      for (ActionId a : e.actions.actions) EXPECT_LT(a.index, 4u);
    }
  }
  EXPECT_EQ(previous, run.cumulative_coverage.size());
  const auto fit = run.fittest_traces();
  for (std::size_t g = 0; g < fit.size(); ++g) {
    EXPECT_EQ(fit[g], run.per_generation[g].fittest().executed.action_trace());
  }

  Gridworld again(c, 0);
  const FuzzRun run2 = fuzz_traces(again, ref, p);
  EXPECT_EQ(run2.fittest_traces(), fit);
  for (std::size_t g = 0; g < fit.size(); ++g) {
    EXPECT_EQ(run2.per_generation[g].fittest().fitness, run.per_generation[g].fittest().fitness);
  }
}

TEST(FuzzTracesTest, CoverageUnionOfPopulations) {
  const GridworldConfig c = testing::two_pit_grid();
  Gridworld env(c, 0);
  FuzzParams p;
  p.generations = 5;
  p.population_size = 10;
  const FuzzRun run = fuzz_traces(env, grid_reference(c), p);
  std::set<StateId> expected;
  auto add = [&](const GenerationRecord& g) {
    for (const auto& e : g.population) {
      for (const auto& s : state_sequence(e.executed)) expected.insert(s);
    }
  };
  add(run.initial);
  EXPECT_EQ(expected.size(), run.initial.coverage_after);
  for (const auto& g : run.per_generation) {
    add(g);
    EXPECT_EQ(expected.size(), g.coverage_after);
  }
  EXPECT_EQ(expected, run.cumulative_coverage);
}

TEST(FuzzTracesTest, StochasticRunIgnoresJobCount) {
  GridworldConfig c = testing::two_pit_grid();
  c.slip_probability = 0.1;
  Gridworld env(c, 0);
  FuzzParams p;
  p.generations = 8;
  p.population_size = 16;
  p.evaluation_resets = 2;
  p.seed = 5;
  const ActionTrace ref = grid_reference(testing::two_pit_grid());
  const FuzzRun one = fuzz_traces(env, ref, p);
  p.jobs = 4;
  const FuzzRun four = fuzz_traces(env, ref, p);
  EXPECT_EQ(one.fittest_traces(), four.fittest_traces());
  EXPECT_EQ(one.cumulative_coverage, four.cumulative_coverage);
  for (std::size_t g = 0; g < one.per_generation.size(); ++g) {
    for (std::size_t j = 0; j < one.per_generation[g].population.size(); ++j) {
      EXPECT_EQ(one.per_generation[g].population[j].fitness, four.per_generation[g].population[j].fitness);
    }
  }
}

TEST(FuzzTracesTest, Errors) {
  Gridworld env(testing::open_grid(), 0);
  EXPECT_RLTB_ERROR(fuzz_traces(env, {}, {}), ErrorCode::EmptyReference);
  FuzzParams p;
  p.generations = 0;
  EXPECT_RLTB_ERROR(fuzz_traces(env, actions({0}), p), ErrorCode::DomainError);
  p = {};
  p.crossover_probability = 1.0;
  EXPECT_RLTB_ERROR(fuzz_traces(env, actions({0}), p), ErrorCode::DomainError);
}

}  // namespace
}  // namespace rltb
