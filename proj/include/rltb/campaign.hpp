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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rltb/boundary_search.hpp"
#include "rltb/gridworld.hpp"
#include "rltb/performance_testing.hpp"
#include "rltb/safety_testing.hpp"
#include "rltb/serialization.hpp"
#include "rltb/trace_fuzzer.hpp"

namespace rltb {

/// Parsed environment selector: "gridworld:<path>" or "fig2". Relative paths
/// resolve against base_dir.
struct EnvironmentSpec {
  enum class Kind { Gridworld, Fig2 };

  Kind kind = Kind::Fig2;
  std::string text;
  std::optional<GridworldConfig> gridworld;

  static EnvironmentSpec parse(std::string_view text, const std::filesystem::path& base_dir = {});

  std::unique_ptr<Environment> make(std::uint64_t seed) const;
  // Default cap for policy episodes in this environment.
  std::size_t episode_cap() const;
};

/// Builds an agent from "qtable:<path>", "random:<seed>" or
/// "scripted:<name>" with name one of into-pit, safe-path (gridworld only)
/// or first-action.
std::unique_ptr<Policy> make_policy(std::string_view agent_spec, const EnvironmentSpec& env,
                                    const std::filesystem::path& base_dir = {});

struct CampaignConfig {
  std::string env_spec;
  std::vector<std::string> agent_specs;
  SearchConfig search;
  // Labels; resolved against the environment's action set.
  std::vector<std::string> search_action_order;
  FuzzParams fuzz;
  SuiteSpec suite;
  std::size_t test_length = 40;
  std::size_t repetitions = 10;
  PerfParams perf;
  // perf.max_episode_steps was given explicitly; otherwise the environment's cap.
  bool perf_cap_given = false;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "rltb-out";
  std::size_t jobs = 1;
  std::filesystem::path base_dir;
};

CampaignConfig campaign_config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
/// Reads a JSON config. The RLTB_SEED environment variable, when set,
/// overrides the seed from the file.
CampaignConfig load_campaign_config(const std::filesystem::path& path);

// Seeds handed to each stage, derived from the campaign seed.
struct StageSeeds {
  std::uint64_t environment;
  std::uint64_t search;
  std::uint64_t safety;
  std::uint64_t fuzz;
  std::uint64_t perf;

  static StageSeeds from(std::uint64_t seed);
};

struct AgentOutcome {
  std::string label;
  VerdictStats verdicts;
  SimplePerformance simple;
  PerfReport perf;
  std::string safety_file;
  std::string perf_file;
  std::string simple_perf_file;
};

struct CampaignOutcome {
  SearchResult search;
  TestSuite suite;
  FuzzRun fuzz;
  std::vector<AgentOutcome> agents;
  std::optional<double> correlation;
  Json summary;
};

/// Runs search, safety testing, fuzzing and performance testing end to end,
/// writing search.json, suite.json, safety.csv, fuzz_traces.json, perf.csv,
/// simple_perf.csv and summary.json to the output directory. With several
/// agents the per-agent files carry an _<index> suffix and correlation.csv
/// holds the inputs of the fail/return correlation. Artifacts of completed
/// stages stay on disk when a later stage throws.
CampaignOutcome run_campaign(const CampaignConfig& config);

}  // namespace rltb
