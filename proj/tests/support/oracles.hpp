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

// Straightforward reference implementations used to check the library.
// They favour obviousness over speed and share no code with src/.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rltb/explicit_mdp.hpp"
#include "rltb/gridworld.hpp"
#include "rltb/performance_testing.hpp"
#include "rltb/random.hpp"
#include "rltb/trace.hpp"

namespace rltb::oracle {

inline std::size_t brute_force_repetitions(double c, double p) {
  for (std::size_t n = 1;; ++n) {
    if (1.0 - std::pow(1.0 - p, static_cast<double>(n)) >= c) return n;
  }
}

// Explicit model of a gridworld, one state per non-wall cell.
inline ExplicitMdp grid_to_explicit(const GridworldConfig& config) {
  Gridworld grid(config, 0);
  ExplicitMdp m;
  m.action_labels = grid.action_set().labels();
  std::map<Cell, std::size_t> index;
  for (int y = 0; y < config.height; ++y) {
    for (int x = 0; x < config.width; ++x) {
      const Cell c{x, y};
      if (grid.is_wall(c)) continue;
      index[c] = m.states.size();
      m.states.push_back(Gridworld::encode(c).encoding());
      m.terminal_class.push_back(grid.classify(c));
    }
  }
  m.initial = index.at(config.start);
  m.transitions.resize(m.states.size());
  for (const auto& [cell, s] : index) {
    if (is_terminal(m.terminal_class[s])) continue;
    m.transitions[s].resize(m.action_labels.size());
    for (std::size_t a = 0; a < m.action_labels.size(); ++a) {
      for (const auto& [p, to] : grid.transition_distribution(cell, ActionId{a})) {
        m.transitions[s][a].push_back({p, index.at(to), grid.reward_for(cell, to)});
      }
    }
  }
  return m;
}

// States from which every policy reaches an unsafe state with probability 1.
// First the largest set from which unsafe states can be avoided forever with
// probability 1 (goals included); a state is safe-ish iff it reaches that set
// with positive probability; bad states are the rest.
inline std::set<std::size_t> bad_states(const ExplicitMdp& m) {
  const std::size_t n = m.states.size();
  std::vector<bool> avoid(n, true);
  for (std::size_t s = 0; s < n; ++s) avoid[s] = m.terminal_class[s] != TerminalClass::Unsafe;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (!avoid[s] || is_terminal(m.terminal_class[s])) continue;
      bool some_action_stays = false;
      for (const auto& outcomes : m.transitions[s]) {
        bool stays = true;
        for (const auto& t : outcomes) stays = stays && avoid[t.next];
        some_action_stays = some_action_stays || stays;
      }
      if (!some_action_stays) {
        avoid[s] = false;
        changed = true;
      }
    }
  }
  std::vector<bool> can_escape = avoid;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (can_escape[s] || is_terminal(m.terminal_class[s])) continue;
      for (const auto& outcomes : m.transitions[s]) {
        for (const auto& t : outcomes) {
          if (t.probability > 0.0 && can_escape[t.next]) {
            can_escape[s] = true;
            changed = true;
          }
        }
      }
    }
  }
  std::set<std::size_t> bad;
  for (std::size_t s = 0; s < n; ++s) {
    if (!can_escape[s]) bad.insert(s);
  }
  return bad;
}

inline std::set<std::size_t> boundary_states(const ExplicitMdp& m, const std::set<std::size_t>& bad) {
  std::set<std::size_t> out;
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    if (bad.contains(s) || is_terminal(m.terminal_class[s])) continue;
    for (const auto& outcomes : m.transitions[s]) {
      for (const auto& t : outcomes) {
        if (t.probability > 0.0 && bad.contains(t.next)) out.insert(s);
      }
    }
  }
  return out;
}

// Recursive DFS over a deterministic explicit MDP with a global visited set.
// Returns the goal path (state indices) and the path states one of whose
// entered children failed.
struct DfsOutcome {
  bool success = false;
  std::vector<std::size_t> path;
  std::vector<std::size_t> actions;
  std::set<std::size_t> flagged;
  std::set<std::size_t> failed;
};

inline DfsOutcome simulate_dfs(const ExplicitMdp& m, const std::vector<std::size_t>& order) {
  DfsOutcome out;
  std::set<std::size_t> visited;
  std::function<bool(std::size_t)> visit = [&](std::size_t s) -> bool {
    visited.insert(s);
    out.path.push_back(s);
    if (m.terminal_class[s] == TerminalClass::Goal) return true;
    if (m.terminal_class[s] == TerminalClass::Unsafe) {
      out.failed.insert(s);
      out.path.pop_back();
      return false;
    }
    for (std::size_t a : order) {
      for (const auto& t : m.transitions[s][a]) {
        if (visited.contains(t.next)) continue;
        out.actions.push_back(a);
        if (visit(t.next)) return true;
        out.actions.pop_back();
        out.flagged.insert(s);
      }
    }
    out.failed.insert(s);
    out.path.pop_back();
    return false;
  };
  out.success = visit(m.initial);
  std::set<std::size_t> on_path(out.path.begin(), out.path.end());
  std::set<std::size_t> flagged;
  for (std::size_t s : out.flagged) {
    if (on_path.contains(s)) flagged.insert(s);
  }
  out.flagged = std::move(flagged);
  return out;
}

// Random layered DAG: state 0 is initial, edges only go to higher indices,
// and the tail holds the terminal states. Transition probabilities are never
// below min_probability.
inline ExplicitMdp random_dag_mdp(std::mt19937_64& rng, std::size_t max_states, bool stochastic) {
  std::uniform_int_distribution<std::size_t> n_dist(6, max_states);
  const std::size_t n = n_dist(rng);
  std::uniform_int_distribution<std::size_t> a_dist(2, 3);
  const std::size_t n_actions = a_dist(rng);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution rare_unsafe(0.15);

  ExplicitMdp m;
  for (std::size_t s = 0; s < n; ++s) m.states.push_back("q" + std::to_string(s));
  for (std::size_t a = 0; a < n_actions; ++a) m.action_labels.push_back(std::string(1, static_cast<char>('a' + a)));
  m.terminal_class.assign(n, TerminalClass::NonTerminal);
  m.terminal_class[n - 1] = TerminalClass::Goal;
  m.terminal_class[n - 2] = TerminalClass::Unsafe;
  m.terminal_class[n - 3] = coin(rng) ? TerminalClass::Unsafe : TerminalClass::Goal;
  for (std::size_t s = 1; s + 3 < n; ++s) {
    if (rare_unsafe(rng)) m.terminal_class[s] = TerminalClass::Unsafe;
  }
  m.transitions.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (is_terminal(m.terminal_class[s])) continue;
    m.transitions[s].resize(n_actions);
    std::uniform_int_distribution<std::size_t> next_dist(s + 1, std::min(n - 1, s + 5));
    for (std::size_t a = 0; a < n_actions; ++a) {
      const std::size_t first = next_dist(rng);
      if (stochastic && coin(rng)) {
        std::size_t second = next_dist(rng);
        if (second == first) second = (first + 1 < n) ? first + 1 : s + 1;
        if (second == first) {
          m.transitions[s][a].push_back({1.0, first, 0.0});
        } else {
          const double p = coin(rng) ? 0.5 : 0.25;
          m.transitions[s][a].push_back({p, first, 0.0});
          m.transitions[s][a].push_back({1.0 - p, second, 0.0});
        }
      } else {
        m.transitions[s][a].push_back({1.0, first, 0.0});
      }
    }
  }
  return m;
}

// Breadth-first shortest path length in a slip-free gridworld, avoiding pits.
inline std::optional<std::size_t> bfs_goal_distance(const GridworldConfig& config) {
  std::set<Cell> walls(config.wall_cells.begin(), config.wall_cells.end());
  std::set<Cell> pits(config.pit_cells.begin(), config.pit_cells.end());
  std::set<Cell> goals(config.goal_cells.begin(), config.goal_cells.end());
  std::map<Cell, std::size_t> dist{{config.start, 0}};
  std::deque<Cell> queue{config.start};
  const int dx[] = {1, 0, -1, 0};
  const int dy[] = {0, 1, 0, -1};
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (goals.contains(c)) return dist[c];
    for (int d = 0; d < 4; ++d) {
      const Cell next{c.x + dx[d], c.y + dy[d]};
      if (next.x < 0 || next.y < 0 || next.x >= config.width || next.y >= config.height) continue;
      if (walls.contains(next) || pits.contains(next) || dist.contains(next)) continue;
      dist[next] = dist[c] + 1;
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

// Optimal discounted state values of an explicit MDP.
inline std::vector<double> value_iteration(const ExplicitMdp& m, double gamma, std::size_t sweeps = 2000) {
  std::vector<double> v(m.states.size(), 0.0);
  for (std::size_t it = 0; it < sweeps; ++it) {
    for (std::size_t s = 0; s < m.states.size(); ++s) {
      if (is_terminal(m.terminal_class[s])) continue;
      double best = -1e300;
      for (const auto& outcomes : m.transitions[s]) {
        double q = 0.0;
        for (const auto& t : outcomes) {
          q += t.probability * (t.reward + (is_terminal(m.terminal_class[t.next]) ? 0.0 : gamma * v[t.next]));
        }
        best = std::max(best, q);
      }
      v[s] = best;
    }
  }
  return v;
}

// Robust performance testing written out step by step, following the same
// stream schedule as the library: test i at prefix length pl draws traces
// from (seed, pl, i), replay attempt r reseeds with (seed, pl, i, r, 0), and
// both evaluations reseed episode e with (eval, e) where eval = (seed, pl, i, 1);
// the agent's own stream uses (eval, e, 1).
struct OracleEntry {
  double trace_return = 0.0;
  double agent_return = 0.0;
  std::size_t n_tests = 0;
};

inline std::map<std::size_t, OracleEntry> straight_line_robust(const Environment& prototype, const Policy& agent,
                                                                const std::vector<ActionTrace>& traces,
                                                                const PerfParams& params) {
  std::map<std::size_t, OracleEntry> out;
  auto env = prototype.clone();
  auto policy = agent.clone();
  for (std::size_t pl = params.step_width;; pl += params.step_width) {
    std::vector<std::size_t> qualifying;
    for (std::size_t k = 0; k < traces.size(); ++k) {
      if (traces[k].actions.size() >= pl) qualifying.push_back(k);
    }
    if (qualifying.size() < params.n_test) break;
    OracleEntry entry;
    for (std::size_t i = 0; i < params.n_test; ++i) {
      Rng pick(derive_seed(params.seed, {pl, i}));
      std::size_t chosen = 0;
      double r_minus = 0.0;
      for (std::size_t attempt = 0;; ++attempt) {
        chosen = qualifying[uniform_index(pick, qualifying.size())];
        env->reset();
        env->reseed(derive_seed(params.seed, {pl, i, attempt, 0}));
        r_minus = 0.0;
        std::size_t done = 0;
        for (std::size_t t = 0; t < pl && !is_terminal(env->current_terminal()); ++t) {
          r_minus += env->step(traces[chosen].actions[t]).reward;
          ++done;
        }
        if (done == pl) break;
      }
      const Snapshot s_pl = env->snapshot();
      const std::uint64_t eval = derive_seed(params.seed, {pl, i, 1});
      double rt = 0.0;
      for (std::size_t e = 0; e < params.n_ep; ++e) {
        env->restore(s_pl);
        env->reseed(derive_seed(eval, {e}));
        for (std::size_t t = pl; t < traces[chosen].actions.size(); ++t) {
          if (is_terminal(env->current_terminal())) break;
          rt += env->step(traces[chosen].actions[t]).reward;
        }
      }
      double ra = 0.0;
      for (std::size_t e = 0; e < params.n_ep; ++e) {
        env->restore(s_pl);
        env->reseed(derive_seed(eval, {e}));
        policy->reseed(derive_seed(eval, {e, 1}));
        for (std::size_t t = 0; t < params.max_episode_steps; ++t) {
          if (is_terminal(env->current_terminal())) break;
          ra += env->step(policy->act(env->current_state())).reward;
        }
      }
      entry.trace_return += r_minus + rt / static_cast<double>(params.n_ep);
      entry.agent_return += r_minus + ra / static_cast<double>(params.n_ep);
      ++entry.n_tests;
    }
    entry.trace_return /= static_cast<double>(params.n_test);
    entry.agent_return /= static_cast<double>(params.n_test);
    out[pl] = entry;
  }
  return out;
}

// Distinct prefix lengths of an interval suite, enumerated naively.
inline std::size_t interval_case_count(const std::vector<std::size_t>& depths, std::size_t is, std::size_t ref_length) {
  std::set<long long> lengths;
  for (std::size_t d : depths) {
    for (long long off = -static_cast<long long>(is); off <= static_cast<long long>(is); ++off) {
      const long long len = static_cast<long long>(d) + off;
      if (len >= 0 && len <= static_cast<long long>(ref_length)) lengths.insert(len);
    }
  }
  return lengths.size();
}

}  // namespace rltb::oracle
