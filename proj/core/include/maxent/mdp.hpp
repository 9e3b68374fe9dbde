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

// Tabular MDPs, demonstration data and the absorbing-state padding transform.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace maxent {

using StateIndex = std::int32_t;
using ActionIndex = std::int32_t;

/// Action recorded on the final step of a trajectory.
inline constexpr ActionIndex kNoAction = -1;

/// Transition probabilities at or below this value are outside the support.
inline constexpr double kSupportThreshold = 1e-15;

/// Tolerance for start-distribution and transition-row normalization.
inline constexpr double kStochasticTolerance = 1e-12;

struct SparseTransition {
  StateIndex from;
  ActionIndex action;
  StateIndex to;
  double prob;
};

/// A finite MDP without reward. Transitions are stored densely as
/// T[s][a][s']; an all-zero (s, a) row marks the action unavailable in s.
/// Terminal states end the episode, so their rows are never expanded.
class Mdp {
 public:
  /// Validates and builds. `transitions` has num_states*num_actions*num_states
  /// entries. Throws std::invalid_argument on any violated invariant.
  Mdp(int num_states, int num_actions, std::vector<double> start_dist,
      std::vector<double> transitions, double discount,
      std::vector<StateIndex> terminal_states);

  static Mdp from_sparse(int num_states, int num_actions,
                         std::vector<double> start_dist,
                         std::span<const SparseTransition> transitions,
                         double discount,
                         std::vector<StateIndex> terminal_states);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  double discount() const { return discount_; }

  std::span<const double> start_dist() const { return start_; }
  double start(StateIndex s) const { return start_[s]; }

  double transition(StateIndex s, ActionIndex a, StateIndex next) const {
    return transitions_[row(s, a) * num_states_ + next];
  }
  std::span<const double> transition_row(StateIndex s, ActionIndex a) const {
    return {transitions_.data() + row(s, a) * num_states_,
            static_cast<std::size_t>(num_states_)};
  }
  std::span<const double> transitions() const { return transitions_; }

  /// True when the (s, a) row carries probability mass.
  bool row_valid(StateIndex s, ActionIndex a) const {
    return row_valid_[row(s, a)] != 0;
  }
  /// True when the agent may take `a` in `s`: the row is valid and `s` is
  /// not terminal.
  bool can_act(StateIndex s, ActionIndex a) const {
    return row_valid(s, a) && !terminal_[s];
  }
  bool is_terminal(StateIndex s) const { return terminal_[s] != 0; }
  const std::vector<StateIndex>& terminal_states() const {
    return terminal_list_;
  }
  bool episodic() const { return !terminal_list_.empty(); }

  Mdp with_discount(double discount) const;
  Mdp with_start(std::vector<double> start_dist) const;

 private:
  std::size_t row(StateIndex s, ActionIndex a) const {
    return static_cast<std::size_t>(s) * num_actions_ + a;
  }

  int num_states_;
  int num_actions_;
  std::vector<double> start_;
  std::vector<double> transitions_;
  std::vector<std::uint8_t> row_valid_;
  std::vector<std::uint8_t> terminal_;
  std::vector<StateIndex> terminal_list_;
  double discount_;
};

struct ParentEdge {
  StateIndex state;
  ActionIndex action;
  double prob;
  double log_prob;
};

struct ChildEdge {
  ActionIndex action;
  StateIndex state;
  double prob;
  double log_prob;
};

/// Parent set P(s') and child set C(s) of every state. Lists are sorted by
/// (state, action) and (action, state) respectively.
struct Adjacency {
  std::vector<std::vector<ParentEdge>> parents;
  std::vector<std::vector<ChildEdge>> children;
};

Adjacency build_adjacency(const Mdp& mdp);

struct Step {
  StateIndex state;
  ActionIndex action;

  friend bool operator==(const Step&, const Step&) = default;
};

/// ((s_1, a_1), ..., (s_m, none)).
struct Trajectory {
  std::vector<Step> steps;

  std::size_t length() const { return steps.size(); }
  StateIndex first_state() const { return steps.front().state; }
  StateIndex last_state() const { return steps.back().state; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Builds a trajectory from a state sequence and the actions between states.
Trajectory make_trajectory(std::span<const StateIndex> states,
                           std::span<const ActionIndex> actions);

/// Throws std::invalid_argument when the trajectory is malformed or uses a
/// transition outside the MDP's support.
void validate_trajectory(const Mdp& mdp, const Trajectory& traj);
bool is_feasible(const Mdp& mdp, const Trajectory& traj);

/// log q(tau) = log p_0(s_1) + sum log T(s_{t+1} | s_t, a_t). Throws when
/// the trajectory is infeasible.
double log_dynamics_probability(const Mdp& mdp, const Trajectory& traj);

/// A non-empty set of demonstrations.
class Dataset {
 public:
  explicit Dataset(std::vector<Trajectory> trajectories);

  std::size_t size() const { return trajectories_.size(); }
  std::size_t max_length() const { return max_length_; }
  const std::vector<Trajectory>& trajectories() const { return trajectories_; }
  const Trajectory& operator[](std::size_t i) const { return trajectories_[i]; }
  auto begin() const { return trajectories_.begin(); }
  auto end() const { return trajectories_.end(); }

 private:
  std::vector<Trajectory> trajectories_;
  std::size_t max_length_ = 0;
};

/// MDP augmented with an absorbing auxiliary state and action. The wrapped
/// MDP has no terminal states.
struct PaddedMdp {
  Mdp mdp;
  Adjacency adjacency;
  int base_states;
  int base_actions;
  StateIndex aux_state;
  ActionIndex aux_action;
  std::vector<std::uint8_t> base_terminal;

  bool was_terminal(StateIndex s) const {
    return s < base_states && base_terminal[s] != 0;
  }
};

PaddedMdp pad_mdp(const Mdp& mdp);

/// Extends every trajectory shorter than `length` with auxiliary steps.
/// Throws std::invalid_argument if any trajectory is longer than `length`.
Dataset pad_dataset(const Dataset& data, const PaddedMdp& padded,
                    std::size_t length);

}  // namespace maxent
