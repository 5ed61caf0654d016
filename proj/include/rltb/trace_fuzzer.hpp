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
#include <set>
#include <span>
#include <vector>

#include "rltb/random.hpp"
#include "rltb/trace.hpp"

namespace rltb {

struct FitnessWeights {
  double coverage = 2.0;
  double positive = 1.5;
  double negative = 1.0;
};

struct FuzzParams {
  std::size_t generations = 50;
  std::size_t population_size = 50;
  std::size_t mutation_effect_size = 15;
  double mutation_stop_probability = 0.2;
  double crossover_probability = 0.25;
  FitnessWeights weights;
  std::uint64_t seed = 0;
  // Executions averaged per fitness evaluation.
  std::size_t evaluation_resets = 1;
  std::size_t jobs = 1;

  void validate() const;
};

struct EvaluatedTrace {
  ActionTrace actions;
  // First execution of the trace.
  Trace executed;
  // Sum of positive rewards and magnitude of the sum of negative rewards,
  // averaged over evaluation resets.
  double r_pos_raw = 0.0;
  double r_neg_raw = 0.0;
  double total_reward = 0.0;
  // States visited by the trace that no earlier population visited.
  std::size_t new_states = 0;
  // Generation-normalized terms and the resulting fitness.
  double coverage = 0.0;
  double r_pos = 0.0;
  double r_neg = 0.0;
  double fitness = 0.0;
};

struct GenerationRecord {
  std::vector<EvaluatedTrace> population;
  std::size_t fittest_index = 0;
  // |Cov_ppop| after folding in this generation.
  std::size_t coverage_after = 0;

  const EvaluatedTrace& fittest() const { return population[fittest_index]; }
};

struct FuzzRun {
  // The evaluated reference trace forming population 0.
  GenerationRecord initial;
  std::vector<GenerationRecord> per_generation;
  std::set<StateId> cumulative_coverage;

  // T_fit: the fittest trace of every generation, in order, cut to the
  // actions its first execution actually applied.
  std::vector<ActionTrace> fittest_traces() const;
};

/// λ_cov·fc + λ_pos·r_pos + λ_neg·(1 − r_neg). Throws DomainError when a
/// normalized term lies outside [0, 1].
double fitness(double coverage, double r_pos, double r_neg, const FitnessWeights& weights);

/// new_states / max_new_states, or 0 when the maximum is 0.
double coverage_term(std::size_t new_states, std::size_t max_new_states);

/// Divides r_pos_raw and r_neg_raw by their generation maxima (0 when the
/// maximum is 0) and stores the results in r_pos / r_neg.
void normalize_rewards(std::span<EvaluatedTrace> generation);

enum class MutationOperator { Insert, Remove, Change, Append };

/// One application of an operator with effect size x.
ActionTrace apply_mutation(ActionTrace trace, MutationOperator op, std::size_t x, std::size_t action_count,
                           Rng& rng);

struct MutationResult {
  ActionTrace trace;
  std::size_t applications = 0;
};

/// Repeatedly applies a uniformly chosen operator with x uniform in
/// [1, ms], stopping after each application with probability p_mstop.
MutationResult mutate(const ActionTrace& trace, std::size_t ms, double p_mstop, std::size_t action_count,
                      Rng& rng);

/// τ1^{-i} · τ2^{+i}.
ActionTrace crossover_at(const ActionTrace& first, const ActionTrace& second, std::size_t point);
/// Crossover at a point uniform in [1, min(|τ1|, |τ2|) − 1]. Throws TooShort
/// when either parent has fewer than two actions.
ActionTrace crossover(const ActionTrace& first, const ActionTrace& second, Rng& rng);

/// Roulette-wheel selection over fitness values; uniform when they sum to 0.
std::size_t select_parent(std::span<const EvaluatedTrace> generation, Rng& rng);

/// Genetic fuzzing seeded with the reference action trace. Every generation
/// consists of population_size offspring of the previous one. Offspring j of
/// generation g is created and evaluated on streams derived from
/// (seed, g, j), so the run is reproducible for any params.jobs.
FuzzRun fuzz_traces(Environment& env, const ActionTrace& reference, const FuzzParams& params);

}  // namespace rltb
