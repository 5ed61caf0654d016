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

#include "rltb/safety_testing.hpp"

#include <charconv>
#include <memory>
#include <set>

#include "rltb/parallel.hpp"
#include "rltb/random.hpp"

namespace rltb {

namespace {

void require_success(const SearchResult& result) {
  if (!result.success) {
    throw Error(ErrorCode::DomainError, "test suites need a successful search result");
  }
}

ActionTrace reference_actions(const SearchResult& result) { return result.reference_trace.action_trace(); }

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::ParseError, "invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(SuiteKind kind) {
  switch (kind) {
    case SuiteKind::Simple: return "simple";
    case SuiteKind::Interval: return "interval";
    case SuiteKind::ActionCoverage: return "action_coverage";
  }
  return "simple";
}

SuiteKind suite_kind_from_string(std::string_view text) {
  if (text == "simple") return SuiteKind::Simple;
  if (text == "interval") return SuiteKind::Interval;
  if (text == "action_coverage") return SuiteKind::ActionCoverage;
  throw Error(ErrorCode::ParseError, "unknown suite kind '" + std::string(text) + "'");
}

SuiteSpec parse_suite_spec(std::string_view text) {
  if (text == "simple") return {SuiteKind::Simple, 0};
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const auto head = text.substr(0, colon);
    const auto tail = text.substr(colon + 1);
    if (head == "interval") return {SuiteKind::Interval, parse_count(tail, "interval size")};
    if (head == "coverage") {
      const std::size_t k = parse_count(tail, "coverage width");
      if (k < 1) throw Error(ErrorCode::ParseError, "coverage width must be at least 1");
      return {SuiteKind::ActionCoverage, k};
    }
  }
  throw Error(ErrorCode::ParseError,
              "suite must be simple, interval:<is> or coverage:<k>, got '" + std::string(text) + "'");
}

std::string format_suite_spec(const SuiteSpec& spec) {
  switch (spec.kind) {
    case SuiteKind::Simple: return "simple";
    case SuiteKind::Interval: return "interval:" + std::to_string(spec.param);
    case SuiteKind::ActionCoverage: return "coverage:" + std::to_string(spec.param);
  }
  return "simple";
}

TestSuite simple_suite(const SearchResult& result) {
  require_success(result);
  const ActionTrace reference = reference_actions(result);
  TestSuite suite{SuiteKind::Simple, 0, {}, result.boundary_depths.empty()};
  for (std::size_t i = 0; i < result.boundary_depths.size(); ++i) {
    suite.cases.push_back(TestCase{prefix(reference, result.boundary_depths[i]), i, 0, SuiteKind::Simple, {}});
  }
  return suite;
}

TestSuite interval_suite(const SearchResult& result, std::size_t interval_size) {
  require_success(result);
  const ActionTrace reference = reference_actions(result);
  const auto length = static_cast<long long>(reference.size());
  const auto is = static_cast<long long>(interval_size);
  TestSuite suite{SuiteKind::Interval, interval_size, {}, result.boundary_depths.empty()};
  std::set<long long> taken;
  for (std::size_t i = 0; i < result.boundary_depths.size(); ++i) {
    const auto depth = static_cast<long long>(result.boundary_depths[i]);
    for (long long off = -is; off <= is; ++off) {
      const long long pl = depth + off;
      if (pl < 0 || pl > length || !taken.insert(pl).second) continue;
      suite.cases.push_back(
          TestCase{prefix(reference, static_cast<std::size_t>(pl)), i, off, SuiteKind::Interval, {}});
    }
  }
  return suite;
}

TestSuite action_coverage_suite(const SearchResult& result, std::size_t k, std::size_t action_count) {
  require_success(result);
  if (k < 1) throw Error(ErrorCode::DomainError, "coverage width k must be at least 1");
  if (action_count < 1) throw Error(ErrorCode::DomainError, "action set is empty");
  const ActionTrace reference = reference_actions(result);
  TestSuite suite{SuiteKind::ActionCoverage, k, {}, result.boundary_depths.empty()};
  for (std::size_t i = 0; i < result.boundary_depths.size(); ++i) {
    const std::size_t depth = result.boundary_depths[i];
    if (depth < k) continue;
    const ActionTrace head = prefix(reference, depth - k);
    // Odometer over A^k; the last position varies fastest.
    std::vector<std::size_t> digits(k, 0);
    while (true) {
      ActionTrace combination;
      for (std::size_t d : digits) combination.actions.push_back(ActionId{d});
      suite.cases.push_back(TestCase{concat(head, combination), i, -static_cast<long long>(k),
                                     SuiteKind::ActionCoverage, combination});
      std::size_t pos = k;
      while (pos > 0 && ++digits[pos - 1] == action_count) digits[--pos] = 0;
      if (pos == 0) break;
    }
  }
  return suite;
}

TestSuite build_suite(const SearchResult& result, const SuiteSpec& spec, std::size_t action_count) {
  switch (spec.kind) {
    case SuiteKind::Simple: return simple_suite(result);
    case SuiteKind::Interval: return interval_suite(result, spec.param);
    case SuiteKind::ActionCoverage: return action_coverage_suite(result, spec.param, action_count);
  }
  return simple_suite(result);
}

CaseVerdict execute_test_case(Environment& env, Policy& policy, const TestCase& test_case,
                              std::size_t test_length, std::size_t repetitions, std::uint64_t seed) {
  if (test_length < 1) throw Error(ErrorCode::DomainError, "test length l must be at least 1");
  if (repetitions < 1) throw Error(ErrorCode::DomainError, "repetition count n must be at least 1");
  env.reseed(seed);
  policy.reseed(derive_seed(seed, {1}));

  CaseVerdict v{test_case.boundary_index, test_case.offset, test_case.kind};
  for (std::size_t r = 0; r < repetitions; ++r) {
    ++v.n_executed;
    env.reset();
    run_actions(env, test_case.actions.actions);
    if (is_terminal(env.current_terminal())) {
      ++v.n_inconclusive;
      continue;
    }
    const Trace rollout = run_policy(env, policy, test_length);
    if (rollout.final_terminal() == TerminalClass::Unsafe) {
      ++v.n_fail;
    } else {
      ++v.n_pass;
    }
  }
  v.invalid = v.n_inconclusive == v.n_executed;
  const std::size_t conclusive = v.n_fail + v.n_pass;
  v.fail_frequency = conclusive == 0 ? 0.0 : static_cast<double>(v.n_fail) / static_cast<double>(conclusive);
  return v;
}

double aggregate_fail_frequency(const std::vector<CaseVerdict>& per_case) {
  double total = 0.0;
  std::size_t valid = 0;
  for (const auto& v : per_case) {
    if (v.invalid) continue;
    total += v.fail_frequency;
    ++valid;
  }
  return valid == 0 ? 0.0 : total / static_cast<double>(valid);
}

VerdictStats execute_suite(Environment& env, Policy& policy, const TestSuite& suite,
                           const ExecutionParams& params) {
  if (suite.cases.empty()) throw Error(ErrorCode::EmptySuite, "test suite has no cases");
  VerdictStats stats;
  stats.per_case.resize(suite.cases.size());

  const std::size_t workers = std::min(std::max<std::size_t>(params.jobs, 1), suite.cases.size());
  std::vector<std::unique_ptr<Environment>> envs;
  std::vector<std::unique_ptr<Policy>> policies;
  if (workers > 1) {
    for (std::size_t w = 0; w < workers; ++w) {
      envs.push_back(env.clone());
      policies.push_back(policy.clone());
    }
  }
  parallel_for(suite.cases.size(), workers, [&](std::size_t w, std::size_t i) {
    Environment& e = workers > 1 ? *envs[w] : env;
    Policy& p = workers > 1 ? *policies[w] : policy;
    stats.per_case[i] = execute_test_case(e, p, suite.cases[i], params.test_length, params.repetitions,
                                          derive_seed(params.seed, {i}));
  });
  stats.aggregate_fail_frequency = aggregate_fail_frequency(stats.per_case);
  return stats;
}

}  // namespace rltb
