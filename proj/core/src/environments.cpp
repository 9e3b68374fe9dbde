// Copyright 2026 The MaxEnt IRL Authors
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

#include "maxent/environments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "maxent/random.hpp"

namespace maxent {
namespace {

std::size_t tidx(int n, int na, StateIndex s, ActionIndex a, StateIndex next) {
  return (static_cast<std::size_t>(s) * na + a) * n + next;
}

double standard_normal(Rng& rng) {
  // Box-Muller; one draw per call keeps streams simple.
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

bool goal_reachable(const std::vector<std::string>& layout) {
  const int rows = static_cast<int>(layout.size());
  const int cols = static_cast<int>(layout[0].size());
  std::vector<bool> seen(static_cast<std::size_t>(rows) * cols, false);
  std::queue<std::pair<int, int>> frontier;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (layout[r][c] == 'S') {
        frontier.push({r, c});
        seen[r * cols + c] = true;
      }
    }
  }
  const int dr[] = {0, 1, 0, -1};
  const int dc[] = {-1, 0, 1, 0};
  while (!frontier.empty()) {
    auto [r, c] = frontier.front();
    frontier.pop();
    if (layout[r][c] == 'G') return true;
    for (int k = 0; k < 4; ++k) {
      const int nr = r + dr[k];
      const int nc = c + dc[k];
      if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
      if (seen[nr * cols + nc] || layout[nr][nc] == 'H') continue;
      seen[nr * cols + nc] = true;
      frontier.push({nr, nc});
    }
  }
  return false;
}

}  // namespace

Environment make_linear_chain(int n) {
  if (n < 2) throw std::invalid_argument("make_linear_chain: n must be >= 2");
  std::vector<double> start(n, 0.0);
  start[0] = 1.0;
  std::vector<double> t(static_cast<std::size_t>(n) * n, 0.0);
  for (StateIndex s = 0; s + 1 < n; ++s) t[tidx(n, 1, s, 0, s + 1)] = 1.0;
  Mdp mdp(n, 1, std::move(start), std::move(t), 1.0, {n - 1});
  FeatureSet feats = FeatureSet::state_indicators(n, 1);
  RewardParams reward = feats.zero_params();
  reward.s[n - 1] = 1.0;
  return {"linear-chain-" + std::to_string(n), std::move(mdp), std::move(feats),
          std::move(reward)};
}

std::vector<std::string> frozen_lake_4x4() {
  return {"SFFF", "FHFH", "FFFH", "HFFG"};
}

Environment make_gridworld(const std::vector<std::string>& layout, double slip,
                           double discount) {
  if (layout.empty() || layout[0].empty()) {
    throw std::invalid_argument("make_gridworld: empty layout");
  }
  if (!(slip >= 0.0 && slip < 1.0)) {
    throw std::invalid_argument("make_gridworld: slip must lie in [0, 1)");
  }
  const int rows = static_cast<int>(layout.size());
  const int cols = static_cast<int>(layout[0].size());
  const int n = rows * cols;
  constexpr int na = 4;
  int starts = 0;
  int goals = 0;
  StateIndex start_state = 0;
  StateIndex goal_state = 0;
  std::vector<StateIndex> terminals;
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(layout[r].size()) != cols) {
      throw std::invalid_argument("make_gridworld: ragged layout");
    }
    for (int c = 0; c < cols; ++c) {
      const StateIndex s = r * cols + c;
      switch (layout[r][c]) {
        case 'S': ++starts; start_state = s; break;
        case 'G': ++goals; goal_state = s; terminals.push_back(s); break;
        case 'H': terminals.push_back(s); break;
        case 'F': break;
        default: throw std::invalid_argument("make_gridworld: unknown cell code");
      }
    }
  }
  if (starts != 1 || goals != 1) {
    throw std::invalid_argument("make_gridworld: need exactly one S and one G");
  }
  std::sort(terminals.begin(), terminals.end());

  const int dr[] = {0, 1, 0, -1};  // left, down, right, up
  const int dc[] = {-1, 0, 1, 0};
  const auto move = [&](StateIndex s, int dir) {
    const int r = s / cols + dr[dir];
    const int c = s % cols + dc[dir];
    if (r < 0 || r >= rows || c < 0 || c >= cols) return s;
    return r * cols + c;
  };
  std::vector<double> t(static_cast<std::size_t>(n) * na * n, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    const bool terminal = std::binary_search(terminals.begin(), terminals.end(), s);
    for (ActionIndex a = 0; a < na; ++a) {
      if (terminal) {
        t[tidx(n, na, s, a, s)] = 1.0;
        continue;
      }
      t[tidx(n, na, s, a, move(s, a))] += 1.0 - slip;
      t[tidx(n, na, s, a, move(s, (a + 1) % 4))] += slip / 2.0;
      t[tidx(n, na, s, a, move(s, (a + 3) % 4))] += slip / 2.0;
    }
  }
  std::vector<double> start(n, 0.0);
  start[start_state] = 1.0;
  Mdp mdp(n, na, std::move(start), std::move(t), discount, std::move(terminals));
  FeatureSet feats = FeatureSet::state_indicators(n, na);
  RewardParams reward = feats.zero_params();
  reward.s[goal_state] = 1.0;
  return {"gridworld-" + std::to_string(rows) + "x" + std::to_string(cols),
          std::move(mdp), std::move(feats), std::move(reward)};
}

std::vector<std::string> random_gridworld_layout(int rows, int cols,
                                                 double hole_prob,
                                                 std::uint64_t seed) {
  if (rows < 1 || cols < 2 || !(hole_prob >= 0.0 && hole_prob < 1.0)) {
    throw std::invalid_argument("random_gridworld_layout: bad parameters");
  }
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(substream(seed, attempt));
    std::vector<std::string> layout(rows, std::string(cols, 'F'));
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (uniform01(rng) < hole_prob) layout[r][c] = 'H';
      }
    }
    layout[0][0] = 'S';
    layout[rows - 1][cols - 1] = 'G';
    if (goal_reachable(layout)) return layout;
  }
}

Environment make_nchain(int n, double slip, double discount) {
  if (n < 2) throw std::invalid_argument("make_nchain: n must be >= 2");
  if (!(slip >= 0.0 && slip < 1.0)) {
    throw std::invalid_argument("make_nchain: slip must lie in [0, 1)");
  }
  constexpr int na = 2;
  constexpr ActionIndex kForward = 0;
  constexpr ActionIndex kReset = 1;
  std::vector<double> t(static_cast<std::size_t>(n) * na * n, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    t[tidx(n, na, s, kForward, std::min(s + 1, n - 1))] += 1.0 - slip;
    t[tidx(n, na, s, kForward, 0)] += slip;
    t[tidx(n, na, s, kReset, 0)] = 1.0;
  }
  std::vector<double> start(n, 0.0);
  start[0] = 1.0;
  Mdp mdp(n, na, std::move(start), std::move(t), discount, {});
  FeatureSet feats = FeatureSet::state_action_indicators(n, na);
  RewardParams reward = feats.zero_params();
  reward.sa[(n - 1) * na + kForward] = 100.0;
  for (StateIndex s = 0; s < n; ++s) reward.sa[s * na + kReset] = 2.0;
  return {"nchain-" + std::to_string(n), std::move(mdp), std::move(feats),
          std::move(reward)};
}

Mdp make_random_mdp(int num_states, int num_actions, int branching,
                    std::uint64_t seed, const RandomMdpOptions& options) {
  if (num_states < 1 || num_actions < 1 || branching < 1 ||
      branching > num_states) {
    throw std::invalid_argument("make_random_mdp: bad sizes");
  }
  if (options.num_terminal < 0 || options.num_terminal >= num_states) {
    throw std::invalid_argument("make_random_mdp: bad terminal count");
  }
  const int n = num_states;
  const int na = num_actions;
  Rng rng(substream(seed, "random-mdp"));

  std::vector<StateIndex> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates with our own uniform draws for portable streams.
  const auto shuffle = [&](std::vector<StateIndex>& v, int first) {
    for (int i = static_cast<int>(v.size()) - 1; i > first; --i) {
      const int j = first + static_cast<int>(uniform01(rng) * (i - first + 1));
      std::swap(v[i], v[j]);
    }
  };
  // State 0 is never terminal so a point-mass start stays non-degenerate.
  shuffle(order, 1);
  std::vector<StateIndex> terminals(order.begin() + 1,
                                    order.begin() + 1 + options.num_terminal);
  std::sort(terminals.begin(), terminals.end());

  std::vector<double> t(static_cast<std::size_t>(n) * na * n, 0.0);
  std::vector<StateIndex> succ(n);
  for (StateIndex s = 0; s < n; ++s) {
    // Keep action 0 available everywhere; others may be masked out.
    for (ActionIndex a = 0; a < na; ++a) {
      if (a > 0 && uniform01(rng) < options.invalid_fraction) continue;
      std::iota(succ.begin(), succ.end(), 0);
      shuffle(succ, 0);
      std::vector<double> w(branching);
      double total = 0.0;
      for (double& x : w) {
        x = -std::log(1.0 - uniform01(rng));
        total += x;
      }
      for (int k = 0; k < branching; ++k) {
        t[tidx(n, na, s, a, succ[k])] = w[k] / total;
      }
    }
  }
  std::vector<double> start(n, 0.0);
  if (options.uniform_start) {
    std::fill(start.begin(), start.end(), 1.0 / n);
  } else {
    start[0] = 1.0;
  }
  return Mdp(n, na, std::move(start), std::move(t), options.discount,
             std::move(terminals));
}

FeatureSet make_random_features(int num_states, int num_actions, int dim_s,
                                int dim_sa, int dim_sas, std::uint64_t seed) {
  FeatureSet feats(num_states, num_actions, dim_s, dim_sa, dim_sas);
  Rng rng(substream(seed, "random-features"));
  for (StateIndex s = 0; s < num_states; ++s) {
    for (double& x : feats.state(s)) x = standard_normal(rng);
    for (ActionIndex a = 0; a < num_actions; ++a) {
      for (double& x : feats.state_action(s, a)) x = standard_normal(rng);
      for (StateIndex next = 0; next < num_states; ++next) {
        for (double& x : feats.transition(s, a, next)) x = standard_normal(rng);
      }
    }
  }
  return feats;
}

RewardParams make_random_params(const FeatureSet& feats, double scale,
                                std::uint64_t seed) {
  RewardParams p = feats.zero_params();
  Rng rng(substream(seed, "random-params"));
  for (auto* block : {&p.s, &p.sa, &p.sas}) {
    for (double& x : *block) x = scale * (2.0 * uniform01(rng) - 1.0);
  }
  return p;
}

}  // namespace maxent
