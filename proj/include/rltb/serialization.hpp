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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rltb/boundary_search.hpp"
#include "rltb/correlation.hpp"
#include "rltb/gridworld.hpp"
#include "rltb/performance_testing.hpp"
#include "rltb/qlearning.hpp"
#include "rltb/safety_testing.hpp"
#include "rltb/trace.hpp"
#include "rltb/trace_fuzzer.hpp"

namespace rltb {

using Json = nlohmann::ordered_json;

// Shortest decimal text that round-trips the double, '.' as separator.
std::string format_double(double value);

Json to_json(const Trace& trace, const ActionSet& actions);
Trace trace_from_json(const Json& j, const ActionSet& actions);

Json to_json(const ActionTrace& trace, const ActionSet& actions);
ActionTrace action_trace_from_json(const Json& j, const ActionSet& actions);

Json to_json(const SearchResult& result, const ActionSet& actions);
SearchResult search_result_from_json(const Json& j, const ActionSet& actions);

Json to_json(const GridworldConfig& config);
GridworldConfig gridworld_config_from_json(const Json& j);

Json to_json(const QTablePolicy& policy);
QTablePolicy qtable_from_json(const Json& j);

Json to_json(const TestSuite& suite, const ActionSet& actions);
TestSuite test_suite_from_json(const Json& j, const ActionSet& actions);

// T_fit document: {"generations": g, "traces": [{"generation", "actions",
// "fitness", "return"}]}.
Json fuzz_traces_to_json(const FuzzRun& run, const ActionSet& actions);
std::vector<ActionTrace> fuzz_traces_from_json(const Json& j, const ActionSet& actions);

std::string verdict_csv(const VerdictStats& stats);
std::vector<CaseVerdict> verdicts_from_csv(std::string_view text);
std::string perf_csv(const PerfReport& report);
std::string simple_perf_csv(const SimplePerformance& perf);
std::string correlation_csv(const std::vector<CorrelationRow>& rows);
std::vector<CorrelationRow> correlation_rows_from_csv(std::string_view text);

// Throws MissingArtifact when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace rltb
