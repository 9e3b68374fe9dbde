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

// Planning and evaluation on tabular MDPs, plus path inference under a
// learned reward.
//
// Values follow the trajectory reward convention: a visit to s at step t
// earns gamma^{t-1} (R(s) + R(s, a) + R(s, a, s')), and a state where no
// action is available (terminal or dead end) earns only R(s).

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "maxent/mdp.hpp"
#include "maxent/reward.hpp"

namespace maxent {

struct Policy {
  int num_states = 0;
  int num_actions = 0;
  /// pi(a|s); rows of states without available actions are all zero.
  std::vector<double> action_probs;
  bool deterministic = false;

  double prob(StateIndex s, ActionIndex a) const {
    return action_probs[static_cast<std::size_t>(s) * num_actions + a];
  }
  /// Most likely action, lowest index on ties; kNoAction for empty rows.
  ActionIndex action(StateIndex s) const;

  /// Uniform over the available actions of each state.
  static Policy uniform(const Mdp& mdp);
};

struct ValueFunction {
  std::vector<double> v;
};

struct ValueIterationOptions {
  double tolerance = 1e-10;
  int max_sweeps = 1'000'000;
  /// Actions within this of the best Q-value count as tied.
  double tie_tolerance = 1e-12;
  /// Values beyond this magnitude are reported as divergence.
  double divergence_bound = 1e15;
};

struct ValueIterationResult {
  ValueFunction value;
  Policy policy;
  int sweeps = 0;
};

/// Bellman-optimal values and the greedy deterministic policy (lowest action
/// index among ties). Throws std::runtime_error on divergence.
ValueIterationResult value_iteration(const Mdp& mdp, const RewardTables& reward,
                                     const ValueIterationOptions& options = {});

/// Exact policy evaluation by a dense linear solve. Throws
/// std::runtime_error when the system is singular (an improper policy under
/// gamma = 1).
ValueFunction policy_value(const Mdp& mdp, const RewardTables& reward,
                           const Policy& policy);

/// Q(s, a) under the given state values.
double q_value(const Mdp& mdp, const RewardTables& reward,
               std::span<const double> values, StateIndex s, ActionIndex a);

/// Inverse learning error: || v(pi*_GT) - v(pi*_L) ||_1 with both policies
/// evaluated under the ground-truth reward.
double ile(const Mdp& mdp, const RewardTables& ground_truth,
           const RewardTables& learned);

/// Samples `count` trajectories. A rollout stops at a terminal state, at a
/// state with no available action, or at `max_len` states. Trajectory i uses
/// its own substream of `seed`.
Dataset sample_rollouts(const Mdp& mdp, const Policy& policy, std::size_t count,
                        int max_len, std::uint64_t seed);

/// Most probable trajectory of length <= L, scoring
/// log f(s_1) + log q'(tau) + R(tau) + log g(s_end), where q' holds the
/// transition probabilities. Ties go to the shorter path, then the
/// lexicographically smaller state sequence, then smaller action indices.
/// Throws std::domain_error when no path has positive score.
Trajectory viterbi_ml_path(const Mdp& mdp, const RewardTables& reward,
                           std::span<const double> start_weights,
                           std::span<const double> end_weights, int length);

/// log p(tau) of a path under the Viterbi scoring above.
double viterbi_score(const Mdp& mdp, const RewardTables& reward,
                     std::span<const double> start_weights,
                     std::span<const double> end_weights,
                     const Trajectory& traj);

/// Posterior over the final state given an observed prefix A -> B:
/// p(G | prefix) proportional to W(B -> G) / W(A -> G) * prior(G), where
/// W sums q' exp(R) over paths between the two states. Suffixes from B keep
/// the prefix's discount offset and have at most L - |prefix| + 1 states;
/// paths from A have at most L states. Throws std::invalid_argument for an
/// infeasible prefix and std::domain_error when no endpoint is reachable.
std::vector<double> destination_posterior(const Mdp& mdp,
                                          const RewardTables& reward,
                                          const Trajectory& prefix,
                                          std::span<const double> prior,
                                          int length);

}  // namespace maxent
