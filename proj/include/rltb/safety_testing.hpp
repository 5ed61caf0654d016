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
#include <string>
#include <string_view>
#include <vector>

#include "rltb/boundary_search.hpp"
#include "rltb/trace.hpp"

namespace rltb {

enum class SuiteKind { Simple, Interval, ActionCoverage };

// "simple" | "interval" | "action_coverage"
std::string_view to_string(SuiteKind kind);
SuiteKind suite_kind_from_string(std::string_view text);

struct TestCase {
  ActionTrace actions;
  std::size_t boundary_index = 0;
  // Signed distance of the prefix end from the boundary depth. Action
  // coverage cases carry -k and keep the appended actions in `combination`.
  long long offset = 0;
  SuiteKind kind = SuiteKind::Simple;
  ActionTrace combination;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct TestSuite {
  SuiteKind kind = SuiteKind::Simple;
  // Interval size or combination width; 0 for simple suites.
  std::size_t param = 0;
  std::vector<TestCase> cases;
  // Set when the search reported no boundary states, so the suite is empty.
  bool no_boundary_states = false;
};

/// Suite selector as written on the command line:
/// "simple" | "interval:<is>" | "coverage:<k>".
struct SuiteSpec {
  SuiteKind kind = SuiteKind::Simple;
  std::size_t param = 0;
};
SuiteSpec parse_suite_spec(std::string_view text);
std::string format_suite_spec(const SuiteSpec& spec);

TestSuite simple_suite(const SearchResult& result);
// Prefixes of length DB[i] + off for off in [-is, is], restricted to
// [0, |τ_ref|]; a length shared by several boundaries is kept once, under the
// lowest boundary index.
TestSuite interval_suite(const SearchResult& result, std::size_t interval_size);
// Prefix of length DB[i] - k followed by each of the |A|^k combinations in
// lexicographic order of action index; boundaries with DB[i] < k are skipped.
TestSuite action_coverage_suite(const SearchResult& result, std::size_t k, std::size_t action_count);
TestSuite build_suite(const SearchResult& result, const SuiteSpec& spec, std::size_t action_count);

struct CaseVerdict {
  std::size_t boundary_index = 0;
  long long offset = 0;
  SuiteKind kind = SuiteKind::Simple;
  std::size_t n_executed = 0;
  std::size_t n_fail = 0;
  std::size_t n_pass = 0;
  std::size_t n_inconclusive = 0;
  bool invalid = false;
  double fail_frequency = 0.0;

  friend bool operator==(const CaseVerdict&, const CaseVerdict&) = default;
};

struct VerdictStats {
  std::vector<CaseVerdict> per_case;
  // Mean fail frequency over valid cases; 0 when no case is valid.
  double aggregate_fail_frequency = 0.0;

  friend bool operator==(const VerdictStats&, const VerdictStats&) = default;
};

struct ExecutionParams {
  std::size_t test_length = 40;
  std::size_t repetitions = 10;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

/// Runs the case `repetitions` times. Each run resets the environment and
/// replays the case's actions; a run whose replay ends in a terminal state is
/// inconclusive. Otherwise the policy acts for up to `test_length` steps and
/// the run fails iff an unsafe state is entered. The case is invalid iff
/// every run was inconclusive.
CaseVerdict execute_test_case(Environment& env, Policy& policy, const TestCase& test_case,
                              std::size_t test_length, std::size_t repetitions, std::uint64_t seed);

/// Case i runs on the stream derived from (seed, i), so results do not
/// depend on params.jobs. Throws EmptySuite.
VerdictStats execute_suite(Environment& env, Policy& policy, const TestSuite& suite,
                           const ExecutionParams& params);

double aggregate_fail_frequency(const std::vector<CaseVerdict>& per_case);

}  // namespace rltb
