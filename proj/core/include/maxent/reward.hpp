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

// Linear reward models over state, state-action and state-action-state
// features.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maxent/mdp.hpp"

namespace maxent {

/// Three parameter-shaped blocks (state, state-action, transition). Used for
/// reward weights, feature expectations and gradients alike.
struct ParamBlocks {
  std::vector<double> s;
  std::vector<double> sa;
  std::vector<double> sas;

  std::size_t size() const { return s.size() + sa.size() + sas.size(); }
  std::vector<double> flatten() const;
  void assign_flat(std::span<const double> flat);
  double dot(const ParamBlocks& other) const;
  double max_abs() const;
  ParamBlocks operator-(const ParamBlocks& other) const;

  friend bool operator==(const ParamBlocks&, const ParamBlocks&) = default;
};

using RewardParams = ParamBlocks;

/// Dense feature tables phi_s[s], phi_sa[s][a], phi_sas[s][a][s']. Any table
/// may have dimension zero.
class FeatureSet {
 public:
  FeatureSet(int num_states, int num_actions, int dim_s, int dim_sa,
             int dim_sas);

  /// One indicator feature per state.
  static FeatureSet state_indicators(int num_states, int num_actions);
  /// One indicator feature per (state, action) pair.
  static FeatureSet state_action_indicators(int num_states, int num_actions);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int dim_s() const { return dim_s_; }
  int dim_sa() const { return dim_sa_; }
  int dim_sas() const { return dim_sas_; }
  bool state_only() const { return dim_sa_ == 0 && dim_sas_ == 0; }

  std::span<const double> state(StateIndex s) const {
    return {phi_s_.data() + static_cast<std::size_t>(s) * dim_s_,
            static_cast<std::size_t>(dim_s_)};
  }
  std::span<double> state(StateIndex s) {
    return {phi_s_.data() + static_cast<std::size_t>(s) * dim_s_,
            static_cast<std::size_t>(dim_s_)};
  }
  std::span<const double> state_action(StateIndex s, ActionIndex a) const {
    return {phi_sa_.data() + sa_index(s, a) * dim_sa_,
            static_cast<std::size_t>(dim_sa_)};
  }
  std::span<double> state_action(StateIndex s, ActionIndex a) {
    return {phi_sa_.data() + sa_index(s, a) * dim_sa_,
            static_cast<std::size_t>(dim_sa_)};
  }
  std::span<const double> transition(StateIndex s, ActionIndex a,
                                     StateIndex next) const {
    return {phi_sas_.data() + sas_index(s, a, next) * dim_sas_,
            static_cast<std::size_t>(dim_sas_)};
  }
  std::span<double> transition(StateIndex s, ActionIndex a, StateIndex next) {
    return {phi_sas_.data() + sas_index(s, a, next) * dim_sas_,
            static_cast<std::size_t>(dim_sas_)};
  }

  /// Zero parameters with this feature set's dimensions.
  RewardParams zero_params() const;
  /// Throws std::invalid_argument when block sizes do not match.
  void check_params(const ParamBlocks& params) const;

 private:
  std::size_t sa_index(StateIndex s, ActionIndex a) const {
    return static_cast<std::size_t>(s) * num_actions_ + a;
  }
  std::size_t sas_index(StateIndex s, ActionIndex a, StateIndex next) const {
    return sa_index(s, a) * num_states_ + next;
  }

  int num_states_;
  int num_actions_;
  int dim_s_;
  int dim_sa_;
  int dim_sas_;
  std::vector<double> phi_s_;
  std::vector<double> phi_sa_;
  std::vector<double> phi_sas_;
};

/// Per-element rewards R(s), R(s, a), R(s, a, s'). Entries may be -inf
/// (forbidden) in padded tables.
struct RewardTables {
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> state;
  std::vector<double> state_action;
  std::vector<double> transition;

  double s(StateIndex st) const { return state[st]; }
  double sa(StateIndex st, ActionIndex a) const {
    return state_action[static_cast<std::size_t>(st) * num_actions + a];
  }
  double sas(StateIndex st, ActionIndex a, StateIndex next) const {
    return transition[(static_cast<std::size_t>(st) * num_actions + a) *
                          num_states +
                      next];
  }
};

RewardTables evaluate_rewards(const FeatureSet& feats,
                              const RewardParams& params);

/// Reward tables of the padded MDP. The auxiliary state and every auxiliary
/// transition receive 0; actions that were impossible in the original MDP
/// (acting after a terminal state, leaving the auxiliary state through an
/// original action, original actions into the auxiliary state) receive -inf.
/// Original states keep their own reward R(s), including terminal states:
/// a terminal state is visited at most once, and its reward is applied there.
RewardTables build_padded_reward(const RewardTables& base,
                                 const PaddedMdp& padded);
RewardTables build_padded_reward(const FeatureSet& feats,
                                 const RewardParams& params,
                                 const PaddedMdp& padded);

/// Discounted feature sums (phi_s(tau), phi_sa(tau), phi_sas(tau)).
ParamBlocks traj_features(const Trajectory& traj, const FeatureSet& feats,
                          double discount);

double traj_reward(const Trajectory& traj, const RewardParams& params,
                   const FeatureSet& feats, double discount);

/// R(tau) evaluated directly from reward tables (supports -inf entries).
double traj_reward(const Trajectory& traj, const RewardTables& rewards,
                   double discount);

/// Mean of traj_features over the dataset.
ParamBlocks empirical_expectations(const Dataset& data,
                                   const FeatureSet& feats, double discount);

}  // namespace maxent
