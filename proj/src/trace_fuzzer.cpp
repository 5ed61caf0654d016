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

#include "rltb/trace_fuzzer.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "rltb/error.hpp"
#include "rltb/parallel.hpp"

namespace rltb {

namespace {

void random_actions(std::vector<ActionId>& out, std::size_t count, std::size_t action_count, Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) out.push_back(ActionId{uniform_index(rng, action_count)});
}

EvaluatedTrace evaluate(Environment& env, ActionTrace actions, const std::set<StateId>& covered,
                        const FuzzParams& params, std::uint64_t generation, std::uint64_t index) {
  EvaluatedTrace e;
  e.actions = std::move(actions);
  std::set<StateId> visited;
  for (std::size_t r = 0; r < params.evaluation_resets; ++r) {
    env.reseed(derive_seed(params.seed, {generation, index, 1 + r}));
    Trace t = exec_action_trace(env, e.actions);
    for (std::size_t i = 0; i <= t.size(); ++i) visited.insert(t.state_at(i));
    double pos = 0.0;
    double neg = 0.0;
    for (const auto& s : t.steps()) {
      if (s.reward > 0.0) pos += s.reward;
      if (s.reward < 0.0) neg += s.reward;
    }
    e.r_pos_raw += pos;
    e.r_neg_raw += std::abs(neg);
    e.total_reward += accumulated_reward(t);
    if (r == 0) e.executed = std::move(t);
  }
  const auto n = static_cast<double>(params.evaluation_resets);
  e.r_pos_raw /= n;
  e.r_neg_raw /= n;
  e.total_reward /= n;
  e.new_states = static_cast<std::size_t>(
      std::count_if(visited.begin(), visited.end(), [&](const StateId& s) { return !covered.contains(s); }));
  return e;
}

// Normalizes a freshly evaluated generation and picks its fittest member.
void score(GenerationRecord& gen, const FitnessWeights& weights) {
  normalize_rewards(gen.population);
  std::size_t max_new = 0;
  for (const auto& e : gen.population) max_new = std::max(max_new, e.new_states);
  for (std::size_t j = 0; j < gen.population.size(); ++j) {
    auto& e = gen.population[j];
    e.coverage = coverage_term(e.new_states, max_new);
    e.fitness = fitness(e.coverage, e.r_pos, e.r_neg, weights);
    if (e.fitness > gen.population[gen.fittest_index].fitness) gen.fittest_index = j;
  }
}

void absorb(std::set<StateId>& covered, const GenerationRecord& gen) {
  for (const auto& e : gen.population) {
    for (std::size_t i = 0; i <= e.executed.size(); ++i) covered.insert(e.executed.state_at(i));
  }
}

}  // namespace

void FuzzParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::DomainError, what); };
  if (generations < 1) fail("generations must be at least 1");
  if (population_size < 1) fail("population size must be at least 1");
  if (mutation_effect_size < 1) fail("mutation effect size must be at least 1");
  if (!(mutation_stop_probability > 0.0 && mutation_stop_probability <= 1.0)) {
    fail("mutation stop probability must lie in (0, 1]");
  }
  if (!(crossover_probability >= 0.0 && crossover_probability < 1.0)) {
    fail("crossover probability must lie in [0, 1)");
  }
  for (double w : {weights.coverage, weights.positive, weights.negative}) {
    if (!std::isfinite(w)) fail("fitness weights must be finite");
  }
  if (evaluation_resets < 1) fail("evaluation resets must be at least 1");
}

std::vector<ActionTrace> FuzzRun::fittest_traces() const {
  std::vector<ActionTrace> out;
  out.reserve(per_generation.size());
  for (const auto& g : per_generation) out.push_back(g.fittest().executed.action_trace());
  return out;
}

double fitness(double coverage, double r_pos, double r_neg, const FitnessWeights& weights) {
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::DomainError, std::string(name) + " term must lie in [0, 1]");
    }
  };
  check(coverage, "coverage");
  check(r_pos, "positive-reward");
  check(r_neg, "negative-reward");
  return weights.coverage * coverage + weights.positive * r_pos + weights.negative * (1.0 - r_neg);
}

double coverage_term(std::size_t new_states, std::size_t max_new_states) {
  if (max_new_states == 0) return 0.0;
  return static_cast<double>(new_states) / static_cast<double>(max_new_states);
}

void normalize_rewards(std::span<EvaluatedTrace> generation) {
  double max_pos = 0.0;
  double max_neg = 0.0;
  for (const auto& e : generation) {
    max_pos = std::max(max_pos, e.r_pos_raw);
    max_neg = std::max(max_neg, e.r_neg_raw);
  }
  for (auto& e : generation) {
    e.r_pos = max_pos > 0.0 ? e.r_pos_raw / max_pos : 0.0;
    e.r_neg = max_neg > 0.0 ? e.r_neg_raw / max_neg : 0.0;
  }
}

ActionTrace apply_mutation(ActionTrace trace, MutationOperator op, std::size_t x, std::size_t action_count,
                           Rng& rng) {
  auto& a = trace.actions;
  switch (op) {
    case MutationOperator::Insert: {
      const std::size_t at = uniform_index(rng, a.size() + 1);
      std::vector<ActionId> block;
      random_actions(block, x, action_count, rng);
      a.insert(a.begin() + static_cast<std::ptrdiff_t>(at), block.begin(), block.end());
      break;
    }
    case MutationOperator::Remove: {
      if (a.size() <= 1) break;
      const std::size_t at = uniform_index(rng, a.size());
      const std::size_t count = std::min({x, a.size() - at, a.size() - 1});
      a.erase(a.begin() + static_cast<std::ptrdiff_t>(at), a.begin() + static_cast<std::ptrdiff_t>(at + count));
      break;
    }
    case MutationOperator::Change: {
      if (a.empty()) break;
      const std::size_t at = uniform_index(rng, a.size());
      const std::size_t count = std::min(x, a.size() - at);
      for (std::size_t i = 0; i < count; ++i) a[at + i] = ActionId{uniform_index(rng, action_count)};
      break;
    }
    case MutationOperator::Append: random_actions(a, x, action_count, rng); break;
  }
  return trace;
}

MutationResult mutate(const ActionTrace& trace, std::size_t ms, double p_mstop, std::size_t action_count,
                      Rng& rng) {
  if (ms < 1) throw Error(ErrorCode::DomainError, "mutation effect size must be at least 1");
  if (!(p_mstop > 0.0 && p_mstop <= 1.0)) throw Error(ErrorCode::DomainError, "p_mstop must lie in (0, 1]");
  if (action_count < 1) throw Error(ErrorCode::DomainError, "action set is empty");
  MutationResult result{trace, 0};
  do {
    const std::size_t x = uniform_between(rng, 1, ms);
    const auto op = static_cast<MutationOperator>(uniform_index(rng, 4));
    result.trace = apply_mutation(std::move(result.trace), op, x, action_count, rng);
    ++result.applications;
  } while (!bernoulli(rng, p_mstop));
  return result;
}

ActionTrace crossover_at(const ActionTrace& first, const ActionTrace& second, std::size_t point) {
  if (point > first.size() || point > second.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "crossover point beyond a parent's length");
  }
  return concat(prefix(first, point), suffix(second, point));
}

ActionTrace crossover(const ActionTrace& first, const ActionTrace& second, Rng& rng) {
  const std::size_t shortest = std::min(first.size(), second.size());
  if (shortest < 2) throw Error(ErrorCode::TooShort, "crossover needs parents with at least two actions");
  return crossover_at(first, second, uniform_between(rng, 1, shortest - 1));
}

std::size_t select_parent(std::span<const EvaluatedTrace> generation, Rng& rng) {
  if (generation.empty()) throw Error(ErrorCode::DomainError, "cannot select from an empty generation");
  double total = 0.0;
  for (const auto& e : generation) total += e.fitness;
  if (!(total > 0.0)) return uniform_index(rng, generation.size());
  double u = uniform01(rng) * total;
  for (std::size_t i = 0; i < generation.size(); ++i) {
    if (u < generation[i].fitness) return i;
    u -= generation[i].fitness;
  }
  // Rounding residue: last member with positive fitness.
  for (std::size_t i = generation.size(); i-- > 0;) {
    if (generation[i].fitness > 0.0) return i;
  }
  return generation.size() - 1;
}

FuzzRun fuzz_traces(Environment& env, const ActionTrace& reference, const FuzzParams& params) {
  params.validate();
  if (reference.empty()) throw Error(ErrorCode::EmptyReference, "fuzzing needs a non-empty reference trace");
  const std::size_t n_actions = env.action_set().size();
  for (ActionId a : reference.actions) {
    if (a.index >= n_actions) throw Error(ErrorCode::InvalidAction, "reference trace holds an unknown action");
  }

  FuzzRun run;
  run.initial.population.push_back(evaluate(env, reference, run.cumulative_coverage, params, 0, 0));
  score(run.initial, params.weights);
  absorb(run.cumulative_coverage, run.initial);
  run.initial.coverage_after = run.cumulative_coverage.size();

  const std::size_t workers = std::min(std::max<std::size_t>(params.jobs, 1), params.population_size);
  std::vector<std::unique_ptr<Environment>> envs;
  if (workers > 1) {
    for (std::size_t w = 0; w < workers; ++w) envs.push_back(env.clone());
  }

  const GenerationRecord* parents = &run.initial;
  run.per_generation.reserve(params.generations);
  for (std::size_t g = 1; g <= params.generations; ++g) {
    GenerationRecord gen;
    gen.population.resize(params.population_size);
    parallel_for(params.population_size, workers, [&](std::size_t w, std::size_t j) {
      Rng rng(derive_seed(params.seed, {g, j, 0}));
      const auto& pool = parents->population;
      ActionTrace child;
      const std::size_t first = select_parent(pool, rng);
      bool crossed = false;
      if (bernoulli(rng, params.crossover_probability)) {
        const std::size_t second = select_parent(pool, rng);
        const auto& a = pool[first].actions;
        const auto& b = pool[second].actions;
        if (std::min(a.size(), b.size()) >= 2) {
          child = crossover(a, b, rng);
          crossed = true;
        }
      }
      if (!crossed) {
        child = mutate(pool[first].actions, params.mutation_effect_size, params.mutation_stop_probability,
                       n_actions, rng)
                    .trace;
      }
      Environment& e = workers > 1 ? *envs[w] : env;
      gen.population[j] = evaluate(e, std::move(child), run.cumulative_coverage, params, g, j);
    });
    score(gen, params.weights);
    absorb(run.cumulative_coverage, gen);
    gen.coverage_after = run.cumulative_coverage.size();
    run.per_generation.push_back(std::move(gen));
    parents = &run.per_generation.back();
  }
  return run;
}

}  // namespace rltb
