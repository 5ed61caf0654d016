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

#include "rltb/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rltb/error.hpp"

namespace rltb {

namespace {

template <class Fn>
auto parsing(std::string_view what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

Json cell_json(Cell c) { return Json::array({c.x, c.y}); }

Cell cell_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::ParseError, "cells must be [x, y] pairs");
  return {j.at(0).get<int>(), j.at(1).get<int>()};
}

Json cells_json(const std::vector<Cell>& cells) {
  Json out = Json::array();
  for (Cell c : cells) out.push_back(cell_json(c));
  return out;
}

std::vector<Cell> cells_from_json(const Json& j) {
  std::vector<Cell> out;
  for (const auto& c : j) out.push_back(cell_from_json(c));
  return out;
}

Json labels(const ActionTrace& trace, const ActionSet& actions) {
  Json out = Json::array();
  for (ActionId a : trace.actions) out.push_back(actions.label(a));
  return out;
}

ActionTrace from_labels(const Json& j, const ActionSet& actions) {
  ActionTrace out;
  for (const auto& label : j) out.actions.push_back(actions.at(label.get<std::string>()));
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Data rows of a CSV document keyed by the header names.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error(ErrorCode::ParseError, "CSV lacks column '" + std::string(name) + "'");
  }
};

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size()) throw Error(ErrorCode::ParseError, "ragged CSV row");
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw Error(ErrorCode::ParseError, "CSV document has no header row");
  return table;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "invalid number '" + text + "'");
  }
  return value;
}

template <class Int>
Int parse_integer(const std::string& text) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "invalid integer '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error(ErrorCode::DomainError, "unformattable number");
  return {buf, ptr};
}

Json to_json(const Trace& trace, const ActionSet& actions) {
  Json steps = Json::array();
  for (const auto& s : trace.steps()) {
    steps.push_back({{"action", actions.label(s.action)},
                     {"reward", s.reward},
                     {"state", s.state.encoding()},
                     {"terminal", to_string(s.terminal)}});
  }
  return {{"initial_state", trace.initial_state().encoding()}, {"steps", std::move(steps)}};
}

Trace trace_from_json(const Json& j, const ActionSet& actions) {
  return parsing("trace", [&] {
    Trace t(StateId(j.at("initial_state").get<std::string>()));
    for (const auto& s : j.at("steps")) {
      t.push(Step{actions.at(s.at("action").get<std::string>()), s.at("reward").get<double>(),
                  StateId(s.at("state").get<std::string>()),
                  terminal_class_from_string(s.at("terminal").get<std::string>())});
    }
    return t;
  });
}

Json to_json(const ActionTrace& trace, const ActionSet& actions) { return {{"actions", labels(trace, actions)}}; }

ActionTrace action_trace_from_json(const Json& j, const ActionSet& actions) {
  return parsing("action trace", [&] { return from_labels(j.at("actions"), actions); });
}

Json to_json(const SearchResult& result, const ActionSet& actions) {
  Json states = Json::array();
  for (const auto& s : result.boundary_states) states.push_back(s.encoding());
  Json explored = Json::array();
  for (const auto& s : result.explored) explored.push_back(s.encoding());
  return {{"reference_trace", to_json(result.reference_trace, actions)},
          {"boundary_depths", result.boundary_depths},
          {"boundary_states", std::move(states)},
          {"success", result.success},
          {"explored", std::move(explored)},
          {"repetitions", result.repetitions}};
}

SearchResult search_result_from_json(const Json& j, const ActionSet& actions) {
  return parsing("search result", [&] {
    SearchResult r;
    r.reference_trace = trace_from_json(j.at("reference_trace"), actions);
    r.boundary_depths = j.at("boundary_depths").get<std::vector<std::size_t>>();
    for (const auto& s : j.at("boundary_states")) r.boundary_states.emplace_back(s.get<std::string>());
    r.success = j.at("success").get<bool>();
    if (j.contains("explored")) {
      for (const auto& s : j.at("explored")) r.explored.emplace(s.get<std::string>());
    }
    if (j.contains("repetitions")) r.repetitions = j.at("repetitions").get<std::size_t>();
    if (r.boundary_depths.size() != r.boundary_states.size()) {
      throw Error(ErrorCode::ParseError, "boundary_depths and boundary_states differ in length");
    }
    for (std::size_t i = 0; i < r.boundary_depths.size(); ++i) {
      if (r.boundary_depths[i] > r.reference_trace.size() ||
          r.reference_trace.state_at(r.boundary_depths[i]) != r.boundary_states[i]) {
        throw Error(ErrorCode::ParseError, "boundary depth " + std::to_string(i) + " does not match the trace");
      }
    }
    return r;
  });
}

Json to_json(const GridworldConfig& c) {
  return {{"width", c.width},
          {"height", c.height},
          {"start", cell_json(c.start)},
          {"goal_cells", cells_json(c.goal_cells)},
          {"pit_cells", cells_json(c.pit_cells)},
          {"wall_cells", cells_json(c.wall_cells)},
          {"slip_probability", c.slip_probability},
          {"reward_mode", c.reward_mode == RewardMode::Dense ? "dense" : "sparse"},
          {"step_reward", c.step_reward},
          {"goal_reward", c.goal_reward},
          {"pit_reward", c.pit_reward},
          {"max_episode_steps", c.max_episode_steps}};
}

GridworldConfig gridworld_config_from_json(const Json& j) {
  return parsing("gridworld config", [&] {
    GridworldConfig c;
    // Missing keys keep the defaults of GridworldConfig.
    c.width = j.value("width", c.width);
    c.height = j.value("height", c.height);
    if (j.contains("start")) c.start = cell_from_json(j.at("start"));
    if (j.contains("goal_cells")) c.goal_cells = cells_from_json(j.at("goal_cells"));
    c.pit_cells = cells_from_json(j.value("pit_cells", Json::array()));
    c.wall_cells = cells_from_json(j.value("wall_cells", Json::array()));
    c.slip_probability = j.value("slip_probability", c.slip_probability);
    const std::string mode = j.value("reward_mode", std::string("sparse"));
    if (mode == "sparse") {
      c.reward_mode = RewardMode::Sparse;
    } else if (mode == "dense") {
      c.reward_mode = RewardMode::Dense;
    } else {
      throw Error(ErrorCode::ConfigInvalid, "reward_mode must be sparse or dense");
    }
    c.step_reward = j.value("step_reward", c.step_reward);
    c.goal_reward = j.value("goal_reward", c.goal_reward);
    c.pit_reward = j.value("pit_reward", c.pit_reward);
    c.max_episode_steps = j.value("max_episode_steps", c.max_episode_steps);
    c.validate();
    return c;
  });
}

Json to_json(const QTablePolicy& policy) {
  Json entries = Json::array();
  for (const auto& [state, values] : policy.table()) {
    entries.push_back({{"state", state.encoding()}, {"values", values}});
  }
  return {{"entries", std::move(entries)}};
}

QTablePolicy qtable_from_json(const Json& j) {
  return parsing("Q-table", [&] {
    const auto& entries = j.at("entries");
    std::size_t width = 0;
    for (const auto& e : entries) width = std::max(width, e.at("values").size());
    QTablePolicy q(width);
    for (const auto& e : entries) {
      auto values = e.at("values").get<std::vector<double>>();
      if (values.size() != width) throw Error(ErrorCode::ParseError, "Q-table rows differ in width");
      q.row(StateId(e.at("state").get<std::string>())) = std::move(values);
    }
    return q;
  });
}

Json to_json(const TestSuite& suite, const ActionSet& actions) {
  Json cases = Json::array();
  for (const auto& c : suite.cases) {
    cases.push_back(
        {{"boundary_index", c.boundary_index}, {"offset", c.offset}, {"actions", labels(c.actions, actions)}});
  }
  return {{"kind", to_string(suite.kind)}, {"param", suite.param}, {"cases", std::move(cases)}};
}

TestSuite test_suite_from_json(const Json& j, const ActionSet& actions) {
  return parsing("test suite", [&] {
    TestSuite s;
    s.kind = suite_kind_from_string(j.at("kind").get<std::string>());
    s.param = j.at("param").get<std::size_t>();
    for (const auto& c : j.at("cases")) {
      TestCase tc;
      tc.boundary_index = c.at("boundary_index").get<std::size_t>();
      tc.offset = c.at("offset").get<long long>();
      tc.kind = s.kind;
      tc.actions = from_labels(c.at("actions"), actions);
      if (s.kind == SuiteKind::ActionCoverage && tc.actions.size() >= s.param) {
        tc.combination = suffix(tc.actions, tc.actions.size() - s.param);
      }
      s.cases.push_back(std::move(tc));
    }
    s.no_boundary_states = s.cases.empty();
    return s;
  });
}

Json fuzz_traces_to_json(const FuzzRun& run, const ActionSet& actions) {
  Json traces = Json::array();
  for (std::size_t g = 0; g < run.per_generation.size(); ++g) {
    const auto& best = run.per_generation[g].fittest();
    traces.push_back({{"generation", g + 1},
                      {"actions", labels(best.executed.action_trace(), actions)},
                      {"fitness", best.fitness},
                      {"return", best.total_reward}});
  }
  return {{"generations", run.per_generation.size()}, {"traces", std::move(traces)}};
}

std::vector<ActionTrace> fuzz_traces_from_json(const Json& j, const ActionSet& actions) {
  return parsing("fuzz traces", [&] {
    std::vector<ActionTrace> out;
    for (const auto& t : j.at("traces")) out.push_back(from_labels(t.at("actions"), actions));
    return out;
  });
}

std::string verdict_csv(const VerdictStats& stats) {
  std::ostringstream out;
  out << "boundary_index,offset,suite_kind,n_executed,n_fail,n_pass,n_inconclusive,invalid,fail_frequency\n";
  for (const auto& v : stats.per_case) {
    out << v.boundary_index << ',' << v.offset << ',' << to_string(v.kind) << ',' << v.n_executed << ','
        << v.n_fail << ',' << v.n_pass << ',' << v.n_inconclusive << ',' << (v.invalid ? "true" : "false") << ','
        << format_double(v.fail_frequency) << '\n';
  }
  return out.str();
}

std::vector<CaseVerdict> verdicts_from_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  const std::size_t bi = t.column("boundary_index"), off = t.column("offset"), kind = t.column("suite_kind"),
                    ex = t.column("n_executed"), fail = t.column("n_fail"), pass = t.column("n_pass"),
                    inc = t.column("n_inconclusive"), inv = t.column("invalid"), ff = t.column("fail_frequency");
  std::vector<CaseVerdict> out;
  for (const auto& row : t.rows) {
    CaseVerdict v;
    v.boundary_index = parse_integer<std::size_t>(row[bi]);
    v.offset = parse_integer<long long>(row[off]);
    v.kind = suite_kind_from_string(row[kind]);
    v.n_executed = parse_integer<std::size_t>(row[ex]);
    v.n_fail = parse_integer<std::size_t>(row[fail]);
    v.n_pass = parse_integer<std::size_t>(row[pass]);
    v.n_inconclusive = parse_integer<std::size_t>(row[inc]);
    v.invalid = row[inv] == "true";
    v.fail_frequency = parse_double(row[ff]);
    out.push_back(v);
  }
  return out;
}

std::string perf_csv(const PerfReport& report) {
  std::ostringstream out;
  out << "pl,R_t,R_a,n_tests_run\n";
  for (const auto& [pl, e] : report.robust) {
    out << pl << ',' << format_double(e.trace_return) << ',' << format_double(e.agent_return) << ','
        << e.n_tests_run << '\n';
  }
  return out.str();
}

std::string simple_perf_csv(const SimplePerformance& perf) {
  return "R_t,R_a\n" + format_double(perf.trace_return) + "," + format_double(perf.agent_return) + "\n";
}

std::string correlation_csv(const std::vector<CorrelationRow>& rows) {
  std::string out = "agent_label,fail_frequency,mean_return\n";
  for (const auto& r : rows) {
    out += csv_field(r.agent_label) + "," + format_double(r.fail_frequency) + "," + format_double(r.mean_return) +
           "\n";
  }
  return out;
}

std::vector<CorrelationRow> correlation_rows_from_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  const std::size_t label = t.column("agent_label"), ff = t.column("fail_frequency"), ret = t.column("mean_return");
  std::vector<CorrelationRow> out;
  for (const auto& row : t.rows) out.push_back({row[label], parse_double(row[ff]), parse_double(row[ret])});
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingArtifact, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return parsing(path.string(), [&] { return Json::parse(text); });
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::MissingArtifact, "cannot write " + path.string());
  out << content;
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace rltb
