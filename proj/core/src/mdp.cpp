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

#include "maxent/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "maxent/logspace.hpp"

namespace maxent {
namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

Mdp::Mdp(int num_states, int num_actions, std::vector<double> start_dist,
         std::vector<double> transitions, double discount,
         std::vector<StateIndex> terminal_states)
    : num_states_(num_states),
      num_actions_(num_actions),
      start_(std::move(start_dist)),
      transitions_(std::move(transitions)),
      discount_(discount) {
  require(num_states > 0, "Mdp: num_states must be positive");
  require(num_actions > 0, "Mdp: num_actions must be positive");
  require(start_.size() == static_cast<std::size_t>(num_states),
          "Mdp: start_dist has wrong size");
  require(transitions_.size() == static_cast<std::size_t>(num_states) *
                                     num_actions * num_states,
          "Mdp: transition tensor has wrong size");
  require(discount > 0.0 && discount <= 1.0,
          "Mdp: discount must lie in (0, 1]");

  double start_sum = 0.0;
  for (double p : start_) {
    require(std::isfinite(p) && p >= 0.0, "Mdp: start_dist entries must be >= 0");
    start_sum += p;
  }
  require(std::abs(start_sum - 1.0) <= kStochasticTolerance,
          "Mdp: start_dist must sum to 1");

  row_valid_.assign(static_cast<std::size_t>(num_states) * num_actions, 0);
  for (StateIndex s = 0; s < num_states; ++s) {
    for (ActionIndex a = 0; a < num_actions; ++a) {
      double sum = 0.0;
      for (double p : transition_row(s, a)) {
        require(std::isfinite(p) && p >= 0.0,
                "Mdp: transition probabilities must be >= 0");
        sum += p;
      }
      if (sum == 0.0) continue;
      require(std::abs(sum - 1.0) <= kStochasticTolerance,
              "Mdp: transition row (" + std::to_string(s) + ", " +
                  std::to_string(a) + ") does not sum to 1");
      row_valid_[row(s, a)] = 1;
    }
  }

  terminal_.assign(num_states, 0);
  for (StateIndex s : terminal_states) {
    require(s >= 0 && s < num_states, "Mdp: terminal state out of range");
    terminal_[s] = 1;
  }
  for (StateIndex s = 0; s < num_states; ++s) {
    if (terminal_[s]) terminal_list_.push_back(s);
  }
}

Mdp Mdp::from_sparse(int num_states, int num_actions,
                     std::vector<double> start_dist,
                     std::span<const SparseTransition> transitions,
                     double discount, std::vector<StateIndex> terminal_states) {
  require(num_states > 0 && num_actions > 0,
          "Mdp: state and action counts must be positive");
  std::vector<double> dense(
      static_cast<std::size_t>(num_states) * num_actions * num_states, 0.0);
  for (const auto& tr : transitions) {
    require(tr.from >= 0 && tr.from < num_states && tr.to >= 0 &&
                tr.to < num_states && tr.action >= 0 &&
                tr.action < num_actions,
            "Mdp: sparse transition index out of range");
    dense[(static_cast<std::size_t>(tr.from) * num_actions + tr.action) *
              num_states +
          tr.to] += tr.prob;
  }
  return Mdp(num_states, num_actions, std::move(start_dist), std::move(dense),
             discount, std::move(terminal_states));
}

Mdp Mdp::with_discount(double discount) const {
  return Mdp(num_states_, num_actions_, start_, transitions_, discount,
             terminal_list_);
}

Mdp Mdp::with_start(std::vector<double> start_dist) const {
  return Mdp(num_states_, num_actions_, std::move(start_dist), transitions_,
             discount_, terminal_list_);
}

Adjacency build_adjacency(const Mdp& mdp) {
  const int n = mdp.num_states();
  Adjacency adj;
  adj.parents.resize(n);
  adj.children.resize(n);
  for (StateIndex s = 0; s < n; ++s) {
    for (ActionIndex a = 0; a < mdp.num_actions(); ++a) {
      if (!mdp.can_act(s, a)) continue;
      auto row = mdp.transition_row(s, a);
      for (StateIndex next = 0; next < n; ++next) {
        const double p = row[next];
        if (p <= kSupportThreshold) continue;
        const double lp = std::log(p);
        adj.children[s].push_back({a, next, p, lp});
        adj.parents[next].push_back({s, a, p, lp});
      }
    }
  }
  return adj;
}

Trajectory make_trajectory(std::span<const StateIndex> states,
                           std::span<const ActionIndex> actions) {
  require(!states.empty(), "make_trajectory: need at least one state");
  require(actions.size() + 1 == states.size(),
          "make_trajectory: need one action per transition");
  Trajectory traj;
  traj.steps.reserve(states.size());
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    traj.steps.push_back({states[i], actions[i]});
  }
  traj.steps.push_back({states.back(), kNoAction});
  return traj;
}

void validate_trajectory(const Mdp& mdp, const Trajectory& traj) {
  require(!traj.steps.empty(), "trajectory is empty");
  const std::size_t m = traj.length();
  for (std::size_t t = 0; t < m; ++t) {
    const Step& step = traj.steps[t];
    require(step.state >= 0 && step.state < mdp.num_states(),
            "trajectory state out of range at step " + std::to_string(t));
    if (t + 1 == m) {
      require(step.action == kNoAction,
              "trajectory must end with a state and no action");
      continue;
    }
    require(step.action >= 0 && step.action < mdp.num_actions(),
            "trajectory action out of range at step " + std::to_string(t));
    require(mdp.can_act(step.state, step.action),
            "trajectory takes an unavailable action at step " +
                std::to_string(t));
    require(mdp.transition(step.state, step.action, traj.steps[t + 1].state) >
                kSupportThreshold,
            "trajectory uses a zero-probability transition at step " +
                std::to_string(t));
  }
}

bool is_feasible(const Mdp& mdp, const Trajectory& traj) {
  try {
    validate_trajectory(mdp, traj);
  } catch (const std::invalid_argument&) {
    return false;
  }
  return mdp.start(traj.first_state()) > 0.0;
}

double log_dynamics_probability(const Mdp& mdp, const Trajectory& traj) {
  validate_trajectory(mdp, traj);
  const double p0 = mdp.start(traj.first_state());
  require(p0 > 0.0, "trajectory starts in a state with zero start probability");
  double lq = std::log(p0);
  for (std::size_t t = 0; t + 1 < traj.length(); ++t) {
    const Step& step = traj.steps[t];
    lq += std::log(
        mdp.transition(step.state, step.action, traj.steps[t + 1].state));
  }
  return lq;
}

Dataset::Dataset(std::vector<Trajectory> trajectories)
    : trajectories_(std::move(trajectories)) {
  require(!trajectories_.empty(), "Dataset: no trajectories");
  for (const auto& traj : trajectories_) {
    require(!traj.steps.empty(), "Dataset: empty trajectory");
    max_length_ = std::max(max_length_, traj.length());
  }
}

PaddedMdp pad_mdp(const Mdp& mdp) {
  const int n = mdp.num_states();
  const int m = mdp.num_actions();
  const int np = n + 1;
  const int mp = m + 1;
  const StateIndex aux_s = n;
  const ActionIndex aux_a = m;

  std::vector<double> start(np, 0.0);
  std::copy(mdp.start_dist().begin(), mdp.start_dist().end(), start.begin());

  std::vector<double> dense(static_cast<std::size_t>(np) * mp * np, 0.0);
  auto at = [&](StateIndex s, ActionIndex a, StateIndex next) -> double& {
    return dense[(static_cast<std::size_t>(s) * mp + a) * np + next];
  };
  for (StateIndex s = 0; s < np; ++s) {
    const bool absorbing = s == aux_s || mdp.is_terminal(s);
    for (ActionIndex a = 0; a < mp; ++a) {
      if (absorbing || a == aux_a) {
        at(s, a, aux_s) = 1.0;
      } else if (mdp.row_valid(s, a)) {
        auto row = mdp.transition_row(s, a);
        for (StateIndex next = 0; next < n; ++next) at(s, a, next) = row[next];
      }
    }
  }

  Mdp augmented(np, mp, std::move(start), std::move(dense), mdp.discount(), {});
  std::vector<std::uint8_t> terminal(n, 0);
  for (StateIndex s : mdp.terminal_states()) terminal[s] = 1;
  Adjacency adjacency = build_adjacency(augmented);
  return PaddedMdp{std::move(augmented), std::move(adjacency), n, m, aux_s,
                   aux_a, std::move(terminal)};
}

Dataset pad_dataset(const Dataset& data, const PaddedMdp& padded,
                    std::size_t length) {
  std::vector<Trajectory> out;
  out.reserve(data.size());
  for (const auto& traj : data) {
    require(traj.length() <= length,
            "pad_dataset: trajectory of length " +
                std::to_string(traj.length()) + " exceeds padding length " +
                std::to_string(length));
    Trajectory extended = traj;
    if (extended.length() < length) {
      extended.steps.back().action = padded.aux_action;
      while (extended.length() < length) {
        extended.steps.push_back({padded.aux_state, padded.aux_action});
      }
      extended.steps.back().action = kNoAction;
    }
    out.push_back(std::move(extended));
  }
  return Dataset(std::move(out));
}

}  // namespace maxent
