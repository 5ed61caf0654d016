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

#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string_view>

#include "rltb/campaign.hpp"
#include "rltb/correlation.hpp"
#include "rltb/error.hpp"
#include "rltb/qlearning.hpp"
#include "rltb/random.hpp"
#include "rltb/serialization.hpp"

namespace rltb::cli {

namespace {

std::uint64_t default_seed() {
  const char* text = std::getenv("RLTB_SEED");
  if (text == nullptr || *text == '\0') return 0;
  const std::string_view view(text);
  std::uint64_t seed = 0;
  const auto [end, ec] = std::from_chars(view.data(), view.data() + view.size(), seed);
  if (ec != std::errc() || end != view.data() + view.size()) {
    throw Error(ErrorCode::ParseError, std::string("RLTB_SEED is not an unsigned integer: ") + text);
  }
  return seed;
}

void require_file(const std::string& path, const std::string& flag) {
  if (path.empty()) throw Error(ErrorCode::MissingArtifact, "required input " + flag + " was not given");
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::MissingArtifact, flag + ": no such file '" + path + "'");
  }
}

bool is_usage_error(ErrorCode code) {
  return code == ErrorCode::MissingArtifact || code == ErrorCode::ParseError || code == ErrorCode::ConfigInvalid;
}

struct SearchOptions {
  std::string env = "fig2";
  double confidence = 0.9;
  std::optional<std::size_t> reps;
  std::vector<std::string> action_order;
  std::size_t max_visits = 1'000'000;
  std::uint64_t seed = 0;
  std::string out = "search.json";
};

struct SafetyOptions {
  std::string env = "fig2";
  std::string agent;
  std::string search = "search.json";
  std::string suite = "simple";
  std::size_t test_length = 40;
  std::size_t reps = 10;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out = "safety.csv";
  std::string suite_out;
};

struct FuzzOptions {
  std::string env = "fig2";
  std::string ref;
  FuzzParams params;
  std::string out = "fuzz_traces.json";
};

struct PerfOptions {
  std::string env = "fig2";
  std::string agent;
  std::string traces = "fuzz_traces.json";
  PerfParams params;
  std::optional<std::size_t> max_steps;
  std::string out = "perf.csv";
  std::string simple_out;
};

struct TrainOptions {
  std::string env;
  QLearningParams params;
  std::string out = "qtable.json";
};

struct CampaignOptions {
  std::string config;
  std::string out_dir;
  std::optional<std::size_t> jobs;
};

int run_search(const SearchOptions& o, std::ostream& out, std::ostream& err) {
  const auto spec = EnvironmentSpec::parse(o.env);
  auto env = spec.make(derive_seed(o.seed, {0}));
  SearchConfig config;
  config.confidence = o.confidence;
  config.explicit_repetitions = o.reps;
  config.max_visits = o.max_visits;
  config.seed = derive_seed(o.seed, {1});
  for (const auto& label : o.action_order) config.action_order.push_back(env->action_set().at(label));
  try {
    const SearchResult result = search_reference(*env, config);
    write_json_file(o.out, to_json(result, env->action_set()));
    out << "success, " << result.boundary_states.size() << " boundary states, |tau_ref| = "
        << result.reference_trace.size() << "\n";
    return kExitOk;
  } catch (const SearchExhausted& e) {
    err << e.what() << " (" << e.explored().size() << " states explored)\n";
    return kExitStageFailure;
  }
}

int run_safety(const SafetyOptions& o, std::ostream& out) {
  require_file(o.search, "--search");
  const auto spec = EnvironmentSpec::parse(o.env);
  auto env = spec.make(derive_seed(o.seed, {0}));
  auto policy = make_policy(o.agent, spec);
  const SearchResult result = search_result_from_json(read_json_file(o.search), env->action_set());
  const TestSuite suite = build_suite(result, parse_suite_spec(o.suite), env->action_set().size());
  if (!o.suite_out.empty()) write_json_file(o.suite_out, to_json(suite, env->action_set()));
  VerdictStats stats;
  if (!suite.cases.empty()) {
    stats = execute_suite(*env, *policy, suite, {o.test_length, o.reps, derive_seed(o.seed, {2}), o.jobs});
  }
  write_text_file(o.out, verdict_csv(stats));
  out << "cases " << suite.cases.size() << ", aggregate fail frequency "
      << format_double(stats.aggregate_fail_frequency) << "\n";
  return kExitOk;
}

int run_fuzz(const FuzzOptions& o, std::ostream& out) {
  require_file(o.ref, "--ref");
  const auto spec = EnvironmentSpec::parse(o.env);
  auto env = spec.make(derive_seed(o.params.seed, {0}));
  const SearchResult result = search_result_from_json(read_json_file(o.ref), env->action_set());
  FuzzParams params = o.params;
  params.seed = derive_seed(o.params.seed, {3});
  const FuzzRun run = fuzz_traces(*env, result.reference_trace.action_trace(), params);
  write_json_file(o.out, fuzz_traces_to_json(run, env->action_set()));
  out << run.per_generation.size() << " fittest traces, " << run.cumulative_coverage.size()
      << " states covered\n";
  return kExitOk;
}

int run_perf(const PerfOptions& o, std::ostream& out) {
  require_file(o.traces, "--traces");
  const auto spec = EnvironmentSpec::parse(o.env);
  auto env = spec.make(derive_seed(o.params.seed, {0}));
  auto policy = make_policy(o.agent, spec);
  const auto traces = fuzz_traces_from_json(read_json_file(o.traces), env->action_set());
  PerfParams params = o.params;
  params.seed = derive_seed(o.params.seed, {4});
  params.max_episode_steps = o.max_steps.value_or(spec.episode_cap());
  const SimplePerformance simple = simple_performance(*env, *policy, traces, params);
  PerfReport report = robust_performance(*env, *policy, traces, params);
  report.simple = simple;
  write_text_file(o.out, perf_csv(report));
  if (!o.simple_out.empty()) write_text_file(o.simple_out, simple_perf_csv(simple));
  out << "R_t " << format_double(simple.trace_return) << ", R_a " << format_double(simple.agent_return) << ", "
      << report.robust.size() << " prefix lengths\n";
  return kExitOk;
}

int run_correlate(const std::string& in, std::ostream& out) {
  require_file(in, "--in");
  const auto rows = correlation_rows_from_csv(read_text_file(in));
  out << format_double(fail_return_correlation(rows)) << "\n";
  return kExitOk;
}

int run_train(const TrainOptions& o, std::ostream& out) {
  const auto spec = EnvironmentSpec::parse(o.env);
  auto env = spec.make(derive_seed(o.params.seed, {0}));
  const QTablePolicy q = train_tabular_q(*env, o.params);
  write_json_file(o.out, to_json(q));
  out << q.table().size() << " states in Q-table\n";
  return kExitOk;
}

int run_campaign_command(const CampaignOptions& o, std::ostream& out) {
  require_file(o.config, "--config");
  CampaignConfig config = load_campaign_config(o.config);
  if (!o.out_dir.empty()) config.output_dir = o.out_dir;
  if (o.jobs) config.jobs = *o.jobs;
  const CampaignOutcome outcome = run_campaign(config);
  out << "artifacts in " << config.output_dir.string() << "\n";
  for (const auto& a : outcome.agents) {
    out << a.label << ": fail frequency " << format_double(a.verdicts.aggregate_fail_frequency) << ", R_a "
        << format_double(a.simple.agent_return) << "\n";
  }
  if (outcome.correlation) out << "correlation " << format_double(*outcome.correlation) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Search-based testing of reinforcement learning agents", "rltb"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  SearchOptions so;
  so.seed = seed;
  auto* search = app.add_subcommand("search", "Find a reference trace and its boundary states");
  search->add_option("--env", so.env, "gridworld:<path> or fig2")->capture_default_str();
  search->add_option("--confidence", so.confidence)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  search->add_option("--reps", so.reps, "Samples per action; overrides --confidence")->check(CLI::PositiveNumber);
  search->add_option("--action-order", so.action_order, "Action labels in trial order")->delimiter(',');
  search->add_option("--max-visits", so.max_visits)->check(CLI::PositiveNumber)->capture_default_str();
  search->add_option("--seed", so.seed)->capture_default_str();
  search->add_option("--out", so.out)->capture_default_str();

  SafetyOptions sa;
  sa.seed = seed;
  auto* safety = app.add_subcommand("safety", "Build a safety test suite and execute it against an agent");
  safety->add_option("--env", sa.env)->capture_default_str();
  safety->add_option("--agent", sa.agent, "qtable:<path>, random:<seed> or scripted:<name>")->required();
  safety->add_option("--search", sa.search, "search.json from the search stage")->capture_default_str();
  safety->add_option("--suite", sa.suite, "simple | interval:<is> | coverage:<k>")->capture_default_str();
  safety->add_option("--test-length", sa.test_length)->check(CLI::PositiveNumber)->capture_default_str();
  safety->add_option("--reps", sa.reps)->check(CLI::PositiveNumber)->capture_default_str();
  safety->add_option("--seed", sa.seed)->capture_default_str();
  safety->add_option("--jobs", sa.jobs)->check(CLI::PositiveNumber)->capture_default_str();
  safety->add_option("--out", sa.out)->capture_default_str();
  safety->add_option("--suite-out", sa.suite_out, "Also write the generated suite as JSON");

  FuzzOptions fo;
  fo.params.seed = seed;
  auto* fuzz = app.add_subcommand("fuzz", "Evolve fuzz traces from the reference trace");
  fuzz->add_option("--env", fo.env)->capture_default_str();
  fuzz->add_option("--ref", fo.ref, "search.json holding the reference trace");
  fuzz->add_option("--generations", fo.params.generations)->check(CLI::PositiveNumber)->capture_default_str();
  fuzz->add_option("--population", fo.params.population_size)->check(CLI::PositiveNumber)->capture_default_str();
  fuzz->add_option("--effect-size", fo.params.mutation_effect_size)->check(CLI::PositiveNumber)->capture_default_str();
  fuzz->add_option("--stop-probability", fo.params.mutation_stop_probability)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  fuzz->add_option("--crossover", fo.params.crossover_probability)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  fuzz->add_option("--lambda-cov", fo.params.weights.coverage)->check(CLI::NonNegativeNumber)->capture_default_str();
  fuzz->add_option("--lambda-pos", fo.params.weights.positive)->check(CLI::NonNegativeNumber)->capture_default_str();
  fuzz->add_option("--lambda-neg", fo.params.weights.negative)->check(CLI::NonNegativeNumber)->capture_default_str();
  fuzz->add_option("--eval-resets", fo.params.evaluation_resets)->check(CLI::PositiveNumber)->capture_default_str();
  fuzz->add_option("--seed", fo.params.seed)->capture_default_str();
  fuzz->add_option("--jobs", fo.params.jobs)->check(CLI::PositiveNumber)->capture_default_str();
  fuzz->add_option("--out", fo.out)->capture_default_str();

  PerfOptions po;
  po.params.seed = seed;
  auto* perf = app.add_subcommand("perf", "Compare an agent with fuzz traces from increasingly deep states");
  perf->add_option("--env", po.env)->capture_default_str();
  perf->add_option("--agent", po.agent)->required();
  perf->add_option("--traces", po.traces, "fuzz_traces.json from the fuzz stage")->capture_default_str();
  perf->add_option("--n-test", po.params.n_test)->check(CLI::PositiveNumber)->capture_default_str();
  perf->add_option("--n-ep", po.params.n_ep)->check(CLI::PositiveNumber)->capture_default_str();
  perf->add_option("--width", po.params.step_width)->check(CLI::PositiveNumber)->capture_default_str();
  perf->add_option("--max-steps", po.max_steps, "Episode cap for the agent")->check(CLI::PositiveNumber);
  perf->add_option("--seed", po.params.seed)->capture_default_str();
  perf->add_option("--jobs", po.params.jobs)->check(CLI::PositiveNumber)->capture_default_str();
  perf->add_option("--out", po.out)->capture_default_str();
  perf->add_option("--simple-out", po.simple_out, "Also write R_t/R_a from the initial state");

  std::string correlate_in;
  auto* correlate = app.add_subcommand("correlate", "Pearson correlation of fail frequency and mean return");
  correlate->add_option("--in", correlate_in, "CSV with agent_label,fail_frequency,mean_return")->required();

  TrainOptions to;
  to.params.seed = seed;
  auto* train = app.add_subcommand("train", "Train a tabular Q-learning agent");
  train->add_option("--env", to.env, "gridworld:<path> or fig2")->required();
  train->add_option("--episodes", to.params.episodes)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--alpha", to.params.alpha)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  train->add_option("--gamma", to.params.gamma)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  train->add_option("--max-steps", to.params.max_episode_steps)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--seed", to.params.seed)->capture_default_str();
  train->add_option("--out", to.out)->capture_default_str();

  CampaignOptions co;
  auto* campaign = app.add_subcommand("campaign", "Run every stage from a JSON config");
  campaign->add_option("--config", co.config)->required();
  campaign->add_option("--out-dir", co.out_dir, "Overrides output_dir from the config");
  campaign->add_option("--jobs", co.jobs)->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*search) return run_search(so, out, err);
    if (*safety) return run_safety(sa, out);
    if (*fuzz) return run_fuzz(fo, out);
    if (*perf) return run_perf(po, out);
    if (*correlate) return run_correlate(correlate_in, out);
    if (*train) return run_train(to, out);
    return run_campaign_command(co, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return is_usage_error(e.code()) ? kExitUsage : kExitStageFailure;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitStageFailure;
  }
}

}  // namespace rltb::cli
