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

// Text formats.
//
// MDP (JSON): num_states, num_actions, start_dist, discount,
//   terminal_states, and transitions as either a dense [s][a][s'] array or
//   a list of [s, a, s', p] entries. All-zero rows mark unavailable actions.
// Features (JSON): phi_s [s][k]; optional phi_sa [s][a][k]; optional phi_sas
//   as a dense [s][a][s'][k] array or {"dim": d, "entries": [[s, a, s',
//   [v_1..v_d]], ...]} with unlisted entries zero.
// Parameters (JSON): theta_s, theta_sa, theta_sas arrays (missing = empty).
// Trajectories: one per line, [[s, a], ..., [s, -1]].
//
// Parse errors raise std::invalid_argument; file errors raise IoError.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "maxent/inference.hpp"
#include "maxent/learning.hpp"
#include "maxent/mdp.hpp"
#include "maxent/reward.hpp"

namespace maxent {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path);
void write_text(const std::string& path, std::string_view text);

Mdp parse_mdp(std::string_view text);
/// Sparse output lists only non-zero transitions.
std::string mdp_to_json(const Mdp& mdp, bool sparse = true);

FeatureSet parse_features(std::string_view text, int num_states,
                          int num_actions);
std::string features_to_json(const FeatureSet& feats);

RewardParams parse_params(std::string_view text);
std::string params_to_json(const RewardParams& params);

Dataset parse_trajectories(std::string_view text);
std::string trajectories_to_text(const Dataset& data);

std::string learn_result_to_json(const LearnResult& result);
LearnResult parse_learn_result(std::string_view text);

std::string marginals_to_json(const MarginalSet& marginals);
MarginalSet parse_marginals(std::string_view text);

inline Mdp read_mdp(const std::string& path) { return parse_mdp(read_text(path)); }
inline FeatureSet read_features(const std::string& path, int num_states,
                                int num_actions) {
  return parse_features(read_text(path), num_states, num_actions);
}
inline RewardParams read_params(const std::string& path) {
  return parse_params(read_text(path));
}
inline Dataset read_trajectories(const std::string& path) {
  return parse_trajectories(read_text(path));
}

}  // namespace maxent
