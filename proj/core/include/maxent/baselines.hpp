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

// Reference algorithms: a brute-force path enumerator used as a test oracle,
// and the approximate state-visitation algorithms of Ziebart et al. (2008,
// 2010) used as learning baselines.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maxent/inference.hpp"
#include "maxent/learning.hpp"
#include "maxent/mdp.hpp"
#include "maxent/optimize.hpp"
#include "maxent/reward.hpp"

namespace maxent {

struct WeightedPath {
  Trajectory traj;
  double log_weight;  // log q(tau) + R(tau)
};

struct EnumeratedEnsemble {
  int length = 0;
  int num_states = 0;
  int num_actions = 0;
  double discount = 1.0;
  std::vector<WeightedPath> paths;
  double log_z = 0.0;
};

inline constexpr std::size_t kMaxEnumeratedPaths = 1'000'000;

/// Every feasible trajectory of length 1..L, found depth-first. Throws
/// std::length_error once more than `max_paths` paths exist.
EnumeratedEnsemble enumerate_ensemble(const Mdp& mdp,
                                      const RewardTables& rewards, int length,
                                      std::size_t max_paths = kMaxEnumeratedPaths);
EnumeratedEnsemble enumerate_ensemble(const Mdp& mdp, const FeatureSet& feats,
                                      const RewardParams& params, int length,
                                      std::size_t max_paths = kMaxEnumeratedPaths);

/// Marginals by direct summation over the ensemble.
MarginalSet oracle_marginals(const EnumeratedEnsemble& ensemble);

enum class ZiebartVariant { k2008, k2010 };

struct ApproxMarginals {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> visitation;    // D[s][t], t = 1..N
  std::vector<double> local_policy;  // p(a|s)

  double d(StateIndex s, int t) const {
    return visitation[static_cast<std::size_t>(s) * horizon + (t - 1)];
  }
  double policy(StateIndex s, ActionIndex a) const {
    return local_policy[static_cast<std::size_t>(s) * num_actions + a];
  }
  /// D_s = sum_t D[s][t].
  std::vector<double> state_visitation() const;
};

/// Backward soft-value pass followed by the forward accumulation
/// D_{s,t+1} = sum_a sum_{s'} D_{s',t} p(a|s) T(s'|s,a), with the policy
/// indexed by the receiving state exactly as the update is usually quoted.
ApproxMarginals ziebart2008_marginals(const Mdp& mdp,
                                      std::span<const double> state_reward,
                                      int horizon);

/// As above with the revised forward update
/// D_{s',t+1} = sum_s sum_a D_{s,t} p(a|s) T(s'|s,a).
ApproxMarginals ziebart2010_marginals(const Mdp& mdp,
                                      std::span<const double> state_reward,
                                      int horizon);

ApproxMarginals ziebart_marginals(ZiebartVariant variant, const Mdp& mdp,
                                  std::span<const double> state_reward,
                                  int horizon);

/// Undiscounted expected state-feature counts sum_s D_s phi_s(s).
ParamBlocks approx_feature_expectations(const ApproxMarginals& approx,
                                        const FeatureSet& feats);

/// Learns state-reward weights with the variant's approximate feature
/// expectations in place of exact marginals. There is no objective value,
/// so the optimizer runs fixed-step gradient ascent regardless of
/// `config.method`. The horizon is the longest demonstration and the
/// empirical expectations are undiscounted. Throws std::invalid_argument for
/// feature sets with state-action or transition features.
LearnResult approx_irl_learn(const Mdp& mdp, const FeatureSet& feats,
                             const Dataset& data, ZiebartVariant variant,
                             const OptimizerConfig& config);

}  // namespace maxent
