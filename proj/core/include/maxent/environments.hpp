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

// Built-in environments and seeded generators.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxent/mdp.hpp"
#include "maxent/reward.hpp"

namespace maxent {

/// An MDP with its feature set and ground-truth reward weights.
struct Environment {
  std::string name;
  Mdp mdp;
  FeatureSet features;
  RewardParams reward;
};

/// Deterministic single-action chain s_0 -> ... -> s_{n-1}; starts at s_0,
/// s_{n-1} is terminal, one indicator feature per state and ground-truth
/// reward 1 at the last state. n = 4 is the four-state worked example.
Environment make_linear_chain(int n);

/// Gridworld actions, in the usual frozen-lake order.
enum GridAction : ActionIndex { kLeft = 0, kDown = 1, kRight = 2, kUp = 3 };

/// The standard 4x4 frozen-lake layout.
std::vector<std::string> frozen_lake_4x4();

/// Rows of 'S' (start, exactly one), 'F' (free), 'H' (hole, terminal) and
/// 'G' (goal, exactly one, terminal). The intended move happens with
/// probability 1 - slip and each perpendicular move with slip / 2; moves off
/// the grid stay put, so slip = 2/3 gives the common three-way split.
/// Features are state indicators; the ground-truth reward is 1 at the goal.
Environment make_gridworld(const std::vector<std::string>& layout, double slip,
                           double discount = 0.99);

/// Random layout with a start in the top-left and a goal in the
/// bottom-right, holes placed independently with `hole_prob` while keeping
/// the goal reachable.
std::vector<std::string> random_gridworld_layout(int rows, int cols,
                                                 double hole_prob,
                                                 std::uint64_t seed);

/// Continuing chain with actions forward (0) and reset (1). Forward moves
/// one state right (staying at the end) but slips into a reset with
/// probability `slip`; reset returns to s_0. Reward 100 for forward at the
/// end and 2 for any reset, on state-action indicator features.
Environment make_nchain(int n, double slip, double discount = 0.95);

struct RandomMdpOptions {
  int num_terminal = 0;
  double discount = 1.0;
  /// Uniform start distribution when true, else a point mass on state 0.
  bool uniform_start = true;
  /// Fraction of (s, a) rows marked unavailable (never all of a state's).
  double invalid_fraction = 0.0;
};

/// Each available (s, a) row has `branching` distinct successors with
/// Dirichlet(1, ..., 1) probabilities. Terminal states are drawn at random
/// and are never the only start state.
Mdp make_random_mdp(int num_states, int num_actions, int branching,
                    std::uint64_t seed, const RandomMdpOptions& options = {});

/// Dense Gaussian features of the given dimensions.
FeatureSet make_random_features(int num_states, int num_actions, int dim_s,
                                int dim_sa, int dim_sas, std::uint64_t seed);

/// Parameters with entries uniform in [-scale, scale].
RewardParams make_random_params(const FeatureSet& feats, double scale,
                                std::uint64_t seed);

}  // namespace maxent
