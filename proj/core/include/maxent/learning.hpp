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

// Maximum-likelihood reward learning and a model-free gradient estimator.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxent/inference.hpp"
#include "maxent/mdp.hpp"
#include "maxent/optimize.hpp"
#include "maxent/reward.hpp"

namespace maxent {

struct LearnResult {
  RewardParams params;
  double log_z = 0.0;
  std::vector<IterationRecord> trace;  // value is the log-likelihood
  bool converged = false;
  std::string stop_reason;
  ParamBlocks gradient;
};

/// Learns reward parameters from Theta = 0 by maximizing the exact
/// log-likelihood. The horizon L is the longest demonstration. Throws
/// std::invalid_argument on infeasible demonstrations.
LearnResult learn_exact(const Mdp& mdp, const FeatureSet& feats,
                        const Dataset& data, InferenceMethod method,
                        const OptimizerConfig& config);
LearnResult learn_exact_poly(const Mdp& mdp, const FeatureSet& feats,
                             const Dataset& data,
                             const OptimizerConfig& config);
LearnResult learn_exact_padded(const Mdp& mdp, const FeatureSet& feats,
                               const Dataset& data,
                               const OptimizerConfig& config);

struct ImportanceSample {
  Trajectory traj;
  double log_prob;  // log probability under the sampling process
};

struct ImportanceEstimate {
  ParamBlocks gradient;
  /// Delta-method standard error of each gradient coordinate.
  ParamBlocks std_error;
  double effective_sample_size = 0.0;
};

/// Self-normalized importance-sampling estimate of the log-likelihood
/// gradient. Raw weights are q(tau) exp(R(tau)) / p_sample(tau). Throws
/// std::domain_error when every weight is zero.
ImportanceEstimate importance_gradient(const Mdp& mdp, const FeatureSet& feats,
                                       const RewardParams& params,
                                       std::span<const ImportanceSample> samples,
                                       const Dataset& data);

/// Rollouts of the uniform-random policy with an independent stop
/// probability at each step, so every feasible trajectory of length <= L
/// has positive probability. Stops are forced at length L, at terminal
/// states and at states with no available action.
std::vector<ImportanceSample> sample_uniform_proposal(const Mdp& mdp,
                                                      int length,
                                                      double stop_prob,
                                                      std::size_t count,
                                                      std::uint64_t seed);

/// Learns on the importance-sampling surrogate log-likelihood
/// Theta . E_D[phi] + mean log q - log Z_hat, where Z_hat averages the raw
/// weights of one fixed batch of proposal samples. The surrogate's gradient
/// is the self-normalized estimate above, so the usual optimizers apply.
LearnResult learn_importance(const Mdp& mdp, const FeatureSet& feats,
                             const Dataset& data,
                             std::span<const ImportanceSample> samples,
                             const OptimizerConfig& config);

}  // namespace maxent
