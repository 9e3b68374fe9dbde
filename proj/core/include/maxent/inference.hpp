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

// Exact forward-backward inference for the maximum-entropy trajectory
// distribution p(tau) = q(tau) exp(R(tau)) / Z over all feasible trajectories
// of length 1..L.
//
// Two equivalent pipelines are provided. The variable-length pipeline keeps a
// backward message per total path length l and costs O(|S|^2 |A| L^2). The
// padded pipeline runs on the MDP augmented with an absorbing auxiliary
// state, fixes l = L and costs O(|S|^2 |A| L). Both produce identical
// partitions and marginals.
//
// All messages are natural-log values; time indices in accessors are
// 1-based to match the usual t = 1..L convention.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "maxent/mdp.hpp"
#include "maxent/reward.hpp"

namespace maxent {

/// log alpha_t(s): weight of all length-t prefixes ending at s.
struct ForwardMessages {
  int length = 0;
  int num_states = 0;
  std::vector<double> log_alpha;

  double at(int t, StateIndex s) const {
    return log_alpha[static_cast<std::size_t>(t - 1) * num_states + s];
  }
};

/// log beta_{l,t}(s): weight of length-t suffixes starting at s inside
/// trajectories of total length l, for 1 <= t <= l <= L.
struct PolyBackwardMessages {
  int length = 0;
  int num_states = 0;
  std::vector<double> log_beta;

  double at(int l, int t, StateIndex s) const {
    return log_beta[offset(l, t) + s];
  }
  std::size_t offset(int l, int t) const {
    const auto lo = static_cast<std::size_t>(l - 1);
    return (lo * (lo + 1) / 2 + static_cast<std::size_t>(t - 1)) *
           static_cast<std::size_t>(num_states);
  }
};

/// log beta_t(s) on the padded MDP (states include the auxiliary state).
struct PaddedBackwardMessages {
  int length = 0;
  int num_states = 0;
  std::vector<double> log_beta;

  double at(int t, StateIndex s) const {
    return log_beta[static_cast<std::size_t>(t - 1) * num_states + s];
  }
};

/// Which marginal tables to fill. State marginals are always computed.
struct MarginalOptions {
  bool state_action = true;
  bool transition = true;
};

/// Per-timestep marginals of the maximum-entropy trajectory distribution over
/// the original states and actions.
struct MarginalSet {
  int length = 0;
  int num_states = 0;
  int num_actions = 0;
  double discount = 1.0;
  double log_z = 0.0;
  bool has_state_action = false;
  bool has_transition = false;
  std::vector<double> p_s;    // [t][s], t = 1..L
  std::vector<double> p_sa;   // [t][s][a], t = 1..L-1
  std::vector<double> p_sas;  // [t][s][a][s'], t = 1..L-1

  double state(int t, StateIndex s) const {
    return p_s[static_cast<std::size_t>(t - 1) * num_states + s];
  }
  double state_action(int t, StateIndex s, ActionIndex a) const {
    return p_sa[(static_cast<std::size_t>(t - 1) * num_states + s) *
                    num_actions +
                a];
  }
  double transition(int t, StateIndex s, ActionIndex a,
                    StateIndex next) const {
    return p_sas[((static_cast<std::size_t>(t - 1) * num_states + s) *
                      num_actions +
                  a) *
                     num_states +
                 next];
  }
};

ForwardMessages forward_messages(const Mdp& mdp, const Adjacency& adjacency,
                                 const RewardTables& rewards, int length);

PolyBackwardMessages backward_messages_poly(const Mdp& mdp,
                                            const Adjacency& adjacency,
                                            const RewardTables& rewards,
                                            int length);

/// `rewards` are the padded tables from build_padded_reward.
PaddedBackwardMessages backward_messages_padded(const PaddedMdp& padded,
                                                const RewardTables& rewards,
                                                int length);

/// log Z = log sum_{l, s} alpha_l(s). `num_states` restricts the state sum
/// (use the original state count on padded messages); defaults to all.
double partition(const ForwardMessages& alpha,
                 std::optional<int> num_states = std::nullopt);

MarginalSet marginals_poly(const ForwardMessages& alpha,
                           const PolyBackwardMessages& beta, const Mdp& mdp,
                           const Adjacency& adjacency,
                           const RewardTables& rewards, double log_z,
                           MarginalOptions options = {});

/// `rewards` are the padded tables. Results cover original states/actions.
MarginalSet marginals_padded(const ForwardMessages& alpha,
                             const PaddedBackwardMessages& beta,
                             const PaddedMdp& padded,
                             const RewardTables& rewards, double log_z,
                             MarginalOptions options = {});

/// Discounted model feature expectations sum_t gamma^{t-1} sum_x p_t(x) phi(x).
ParamBlocks model_expectations(const MarginalSet& marginals,
                               const FeatureSet& feats);

/// Ascent gradient of the log-likelihood: empirical minus model feature
/// expectations.
ParamBlocks nll_gradient(const ParamBlocks& empirical,
                         const MarginalSet& marginals, const FeatureSet& feats);
ParamBlocks nll_gradient(const Dataset& data, const MarginalSet& marginals,
                         const FeatureSet& feats);

/// l(theta) = mean_D[R(tau) + log q(tau)] - log Z. Throws on infeasible
/// demonstrations.
double log_likelihood(const Dataset& data, const Mdp& mdp,
                      const FeatureSet& feats, const RewardParams& params,
                      double log_z);

enum class InferenceMethod { kPolynomial, kPadded };

/// Bundles an MDP, its adjacency and padded form for repeated evaluation at
/// different reward parameters.
class ExactInference {
 public:
  ExactInference(Mdp mdp, FeatureSet feats, int length);

  struct Result {
    double log_z;
    MarginalSet marginals;
  };

  Result evaluate(const RewardParams& params, InferenceMethod method,
                  MarginalOptions options = {}) const;
  double log_partition(const RewardParams& params) const;

  /// Marginal tables needed for gradients of this feature set.
  MarginalOptions gradient_options() const {
    return {feats_.dim_sa() > 0, feats_.dim_sas() > 0};
  }

  const Mdp& mdp() const { return mdp_; }
  const Adjacency& adjacency() const { return adjacency_; }
  const PaddedMdp& padded() const { return padded_; }
  const FeatureSet& features() const { return feats_; }
  int length() const { return length_; }

 private:
  Mdp mdp_;
  FeatureSet feats_;
  int length_;
  Adjacency adjacency_;
  PaddedMdp padded_;
};

}  // namespace maxent
