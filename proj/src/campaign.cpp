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

#include "rltb/campaign.hpp"

#include <charconv>
#include <cstdlib>

#include "rltb/correlation.hpp"
#include "rltb/error.hpp"
#include "rltb/explicit_mdp.hpp"
#include "rltb/policies.hpp"
#include "rltb/qlearning.hpp"
#include "rltb/random.hpp"

namespace rltb {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view path) {
  std::filesystem::path p{std::string(path)};
  if (p.is_absolute() || base.empty()) return p;
  return base / p;
}

std::uint64_t parse_seed(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::string suffixed(const std::string& stem, const std::string& ext, std::size_t index, bool many) {
  return many ? stem + "_" + std::to_string(index) + ext : stem + ext;
}

}  // namespace

EnvironmentSpec EnvironmentSpec::parse(std::string_view text, const std::filesystem::path& base_dir) {
  EnvironmentSpec spec;
  spec.text = std::string(text);
  if (text == "fig2") {
    spec.kind = Kind::Fig2;
    return spec;
  }
  constexpr std::string_view prefix = "gridworld:";
  if (text.starts_with(prefix)) {
    spec.kind = Kind::Gridworld;
    spec.gridworld = gridworld_config_from_json(read_json_file(resolve(base_dir, text.substr(prefix.size()))));
    return spec;
  }
  throw Error(ErrorCode::ParseError, "environment must be gridworld:<path> or fig2, got '" + spec.text + "'");
}

std::unique_ptr<Environment> EnvironmentSpec::make(std::uint64_t seed) const {
  if (kind == Kind::Gridworld) return gridworld_new(*gridworld, seed);
  return std::make_unique<ExplicitMdpEnvironment>(fig2_model(), seed);
}

std::size_t EnvironmentSpec::episode_cap() const {
  return kind == Kind::Gridworld ? gridworld->max_episode_steps : 200;
}

std::unique_ptr<Policy> make_policy(std::string_view agent_spec, const EnvironmentSpec& env,
                                    const std::filesystem::path& base_dir) {
  const auto colon = agent_spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::ParseError, "agent must be qtable:<path>, random:<seed> or scripted:<name>");
  }
  const auto kind = agent_spec.substr(0, colon);
  const auto arg = agent_spec.substr(colon + 1);
  const std::size_t n_actions = env.make(0)->action_set().size();
  if (kind == "qtable") {
    auto q = qtable_from_json(read_json_file(resolve(base_dir, arg)));
    if (q.action_count() != n_actions && !q.table().empty()) {
      throw Error(ErrorCode::ConfigInvalid, "Q-table width does not match the environment's action count");
    }
    return std::make_unique<QTablePolicy>(std::move(q));
  }
  if (kind == "random") return std::make_unique<RandomPolicy>(n_actions, parse_seed(arg, "random agent seed"));
  if (kind == "scripted") {
    if (arg == "first-action") return std::make_unique<ConstantPolicy>(ActionId{0});
    if (arg == "into-pit" || arg == "safe-path") {
      if (env.kind != EnvironmentSpec::Kind::Gridworld) {
        throw Error(ErrorCode::ConfigInvalid, "scripted:" + std::string(arg) + " needs a gridworld environment");
      }
      return std::make_unique<GridDistancePolicy>(*env.gridworld, arg == "into-pit"
                                                                     ? GridDistancePolicy::Target::NearestPit
                                                                     : GridDistancePolicy::Target::GoalAvoidingPits);
    }
    throw Error(ErrorCode::ParseError, "unknown scripted agent '" + std::string(arg) + "'");
  }
  throw Error(ErrorCode::ParseError, "unknown agent kind '" + std::string(kind) + "'");
}

StageSeeds StageSeeds::from(std::uint64_t seed) {
  return {derive_seed(seed, {0}), derive_seed(seed, {1}), derive_seed(seed, {2}), derive_seed(seed, {3}),
          derive_seed(seed, {4})};
}

CampaignConfig campaign_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  try {
    CampaignConfig c;
    c.base_dir = base_dir;
    c.env_spec = j.at("env_spec").get<std::string>();
    if (j.contains("agent_specs")) c.agent_specs = j.at("agent_specs").get<std::vector<std::string>>();
    if (j.contains("agent_spec")) c.agent_specs.insert(c.agent_specs.begin(), j.at("agent_spec").get<std::string>());
    if (c.agent_specs.empty()) throw Error(ErrorCode::ConfigInvalid, "campaign needs agent_spec or agent_specs");
    if (const auto s = j.find("search"); s != j.end()) {
      c.search.confidence = s->value("confidence", c.search.confidence);
      if (s->contains("explicit_repetitions") && !s->at("explicit_repetitions").is_null()) {
        c.search.explicit_repetitions = s->at("explicit_repetitions").get<std::size_t>();
      }
      c.search_action_order = s->value("action_order", std::vector<std::string>{});
      c.search.max_visits = s->value("max_visits", c.search.max_visits);
    }
    if (const auto f = j.find("fuzz"); f != j.end()) {
      c.fuzz.generations = f->value("generations", c.fuzz.generations);
      c.fuzz.population_size = f->value("population_size", c.fuzz.population_size);
      c.fuzz.mutation_effect_size = f->value("mutation_effect_size", c.fuzz.mutation_effect_size);
      c.fuzz.mutation_stop_probability = f->value("mutation_stop_probability", c.fuzz.mutation_stop_probability);
      c.fuzz.crossover_probability = f->value("crossover_probability", c.fuzz.crossover_probability);
      c.fuzz.weights.coverage = f->value("lambda_cov", c.fuzz.weights.coverage);
      c.fuzz.weights.positive = f->value("lambda_pos", c.fuzz.weights.positive);
      c.fuzz.weights.negative = f->value("lambda_neg", c.fuzz.weights.negative);
      c.fuzz.evaluation_resets = f->value("evaluation_resets", c.fuzz.evaluation_resets);
    }
    if (const auto s = j.find("safety"); s != j.end()) {
      c.suite = parse_suite_spec(s->value("suite", std::string("simple")));
      c.test_length = s->value("l", c.test_length);
      c.repetitions = s->value("n", c.repetitions);
    }
    if (const auto p = j.find("perf"); p != j.end()) {
      c.perf.n_ep = p->value("n_ep", c.perf.n_ep);
      c.perf.n_test = p->value("n_test", c.perf.n_test);
      c.perf.step_width = p->value("step_width", c.perf.step_width);
      if (p->contains("max_episode_steps")) {
        c.perf.max_episode_steps = p->at("max_episode_steps").get<std::size_t>();
        c.perf_cap_given = true;
      }
    }
    c.seed = j.value("seed", std::uint64_t{0});
    c.output_dir = resolve(base_dir, j.value("output_dir", std::string("rltb-out")));
    c.jobs = j.value("jobs", std::size_t{1});
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("campaign config: ") + e.what());
  }
}

CampaignConfig load_campaign_config(const std::filesystem::path& path) {
  CampaignConfig c = campaign_config_from_json(read_json_file(path), path.parent_path());
  if (const char* env_seed = std::getenv("RLTB_SEED"); env_seed != nullptr && *env_seed != '\0') {
    c.seed = parse_seed(env_seed, "RLTB_SEED");
  }
  return c;
}

CampaignOutcome run_campaign(const CampaignConfig& config) {
  const EnvironmentSpec env_spec = EnvironmentSpec::parse(config.env_spec, config.base_dir);
  std::vector<std::unique_ptr<Policy>> agents;
  for (const auto& spec : config.agent_specs) agents.push_back(make_policy(spec, env_spec, config.base_dir));
  const StageSeeds seeds = StageSeeds::from(config.seed);
  const auto& out_dir = config.output_dir;
  std::filesystem::create_directories(out_dir);

  auto env = env_spec.make(seeds.environment);
  const ActionSet actions = env->action_set();
  CampaignOutcome outcome;

  SearchConfig search = config.search;
  search.seed = seeds.search;
  for (const auto& label : config.search_action_order) search.action_order.push_back(actions.at(label));
  outcome.search = search_reference(*env, search);
  write_json_file(out_dir / "search.json", to_json(outcome.search, actions));

  outcome.suite = build_suite(outcome.search, config.suite, actions.size());
  write_json_file(out_dir / "suite.json", to_json(outcome.suite, actions));

  const bool many = agents.size() > 1;
  const ExecutionParams exec{config.test_length, config.repetitions, seeds.safety, config.jobs};
  for (std::size_t i = 0; i < agents.size(); ++i) {
    AgentOutcome a;
    a.label = config.agent_specs[i];
    a.safety_file = suffixed("safety", ".csv", i, many);
    if (!outcome.suite.cases.empty()) a.verdicts = execute_suite(*env, *agents[i], outcome.suite, exec);
    write_text_file(out_dir / a.safety_file, verdict_csv(a.verdicts));
    outcome.agents.push_back(std::move(a));
  }

  FuzzParams fuzz = config.fuzz;
  fuzz.seed = seeds.fuzz;
  fuzz.jobs = config.jobs;
  outcome.fuzz = fuzz_traces(*env, outcome.search.reference_trace.action_trace(), fuzz);
  write_json_file(out_dir / "fuzz_traces.json", fuzz_traces_to_json(outcome.fuzz, actions));
  const std::vector<ActionTrace> fittest = outcome.fuzz.fittest_traces();

  PerfParams perf = config.perf;
  perf.seed = seeds.perf;
  perf.jobs = config.jobs;
  if (!config.perf_cap_given) perf.max_episode_steps = env_spec.episode_cap();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    AgentOutcome& a = outcome.agents[i];
    a.perf_file = suffixed("perf", ".csv", i, many);
    a.simple_perf_file = suffixed("simple_perf", ".csv", i, many);
    a.simple = simple_performance(*env, *agents[i], fittest, perf);
    a.perf = robust_performance(*env, *agents[i], fittest, perf);
    a.perf.simple = a.simple;
    write_text_file(out_dir / a.perf_file, perf_csv(a.perf));
    write_text_file(out_dir / a.simple_perf_file, simple_perf_csv(a.simple));
  }

  Json correlation = nullptr;
  Json correlation_error = nullptr;
  if (many) {
    std::vector<CorrelationRow> rows;
    for (const auto& a : outcome.agents) {
      rows.push_back({a.label, a.verdicts.aggregate_fail_frequency, a.simple.agent_return});
    }
    write_text_file(out_dir / "correlation.csv", correlation_csv(rows));
    try {
      outcome.correlation = fail_return_correlation(rows);
      correlation = *outcome.correlation;
    } catch (const Error& e) {
      correlation_error = e.what();
    }
  }

  Json agent_docs = Json::array();
  for (const auto& a : outcome.agents) {
    Json robust = Json::array();
    for (const auto& [pl, e] : a.perf.robust) {
      robust.push_back({{"pl", pl}, {"R_t", e.trace_return}, {"R_a", e.agent_return}, {"n_tests_run", e.n_tests_run}});
    }
    agent_docs.push_back({{"label", a.label},
                          {"aggregate_fail_frequency", a.verdicts.aggregate_fail_frequency},
                          {"simple", {{"R_t", a.simple.trace_return}, {"R_a", a.simple.agent_return}}},
                          {"robust", std::move(robust)},
                          {"files", {{"safety", a.safety_file}, {"perf", a.perf_file}, {"simple_perf", a.simple_perf_file}}}});
  }
  outcome.summary = {
      {"env_spec", config.env_spec},
      {"seed", config.seed},
      {"search",
       {{"success", outcome.search.success},
        {"reference_length", outcome.search.reference_trace.size()},
        {"boundary_count", outcome.search.boundary_states.size()},
        {"repetitions", outcome.search.repetitions}}},
      {"suite",
       {{"spec", format_suite_spec(config.suite)},
        {"cases", outcome.suite.cases.size()},
        {"no_boundary_states", outcome.suite.no_boundary_states}}},
      {"fuzz",
       {{"generations", outcome.fuzz.per_generation.size()},
        {"covered_states", outcome.fuzz.cumulative_coverage.size()}}},
      {"agents", std::move(agent_docs)},
      {"correlation", correlation},
  };
  if (!correlation_error.is_null()) outcome.summary["correlation_error"] = correlation_error;
  write_json_file(out_dir / "summary.json", outcome.summary);
  return outcome;
}

}  // namespace rltb
