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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "maxent/environments.hpp"
#include "maxent/mdp.hpp"
#include "test_support.hpp"

namespace maxent {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;
using testing::chain_prefixes;

bool has_parent(const Adjacency& adj, StateIndex to, StateIndex from,
                ActionIndex a) {
  return std::any_of(adj.parents[to].begin(), adj.parents[to].end(),
                     [&](const ParentEdge& e) {
                       return e.state == from && e.action == a;
                     });
}

bool has_child(const Adjacency& adj, StateIndex from, ActionIndex a,
               StateIndex to) {
  return std::any_of(adj.children[from].begin(), adj.children[from].end(),
                     [&](const ChildEdge& e) {
                       return e.state == to && e.action == a;
                     });
}

TEST(MdpTest, RejectsBadStartDistribution) {
  EXPECT_THROW(Mdp(2, 1, {0.5, 0.4}, {0, 1, 0, 1}, 1.0, {}),
               std::invalid_argument);
}

TEST(MdpTest, RejectsNonStochasticRow) {
  EXPECT_THROW(Mdp(2, 1, {1, 0}, {0.5, 0.4, 0, 1}, 1.0, {}),
               std::invalid_argument);
}

TEST(MdpTest, RejectsOutOfRangeTerminalAndDiscount) {
  EXPECT_THROW(Mdp(2, 1, {1, 0}, {0, 1, 0, 1}, 1.0, {2}),
               std::invalid_argument);
  EXPECT_THROW(Mdp(2, 1, {1, 0}, {0, 1, 0, 1}, 0.0, {}),
               std::invalid_argument);
  EXPECT_THROW(Mdp(2, 1, {1, 0}, {0, 1, 0, 1}, 1.5, {}),
               std::invalid_argument);
}

TEST(MdpTest, AllZeroRowMarksActionUnavailable) {
  Mdp mdp(2, 2, {1, 0}, {0, 1, 0, 0, 0, 1, 0, 1}, 1.0, {});
  EXPECT_TRUE(mdp.can_act(0, 0));
  EXPECT_FALSE(mdp.can_act(0, 1));
  Adjacency adj = build_adjacency(mdp);
  for (const auto& e : adj.children[0]) EXPECT_NE(e.action, 1);
  EXPECT_EQ(adj.children[0].size(), 1u);
}

TEST(AdjacencyTest, FourStateChain) {
  Environment env = make_linear_chain(4);
  Adjacency adj = build_adjacency(env.mdp);
  ASSERT_EQ(adj.parents[1].size(), 1u);
  EXPECT_EQ(adj.parents[1][0].state, 0);
  EXPECT_EQ(adj.parents[1][0].action, 0);
  ASSERT_EQ(adj.children[2].size(), 1u);
  EXPECT_EQ(adj.children[2][0].state, 3);
  EXPECT_THAT(adj.children[3], IsEmpty());
  EXPECT_THAT(adj.parents[0], IsEmpty());
}

TEST(AdjacencyTest, MatchesTransitionSupportOnRandomMdps) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    RandomMdpOptions opt;
    opt.invalid_fraction = 0.3;
    Mdp mdp = make_random_mdp(5, 3, 2, seed, opt);
    Adjacency adj = build_adjacency(mdp);
    std::size_t edges = 0;
    for (StateIndex s = 0; s < 5; ++s) {
      for (ActionIndex a = 0; a < 3; ++a) {
        for (StateIndex next = 0; next < 5; ++next) {
          const bool support = mdp.transition(s, a, next) > kSupportThreshold;
          EXPECT_EQ(has_parent(adj, next, s, a), support);
          EXPECT_EQ(has_child(adj, s, a, next), support);
          edges += support;
        }
      }
      for (const auto& e : adj.children[s]) {
        EXPECT_DOUBLE_EQ(e.log_prob, std::log(e.prob));
      }
    }
    std::size_t parent_edges = 0;
    for (const auto& p : adj.parents) parent_edges += p.size();
    EXPECT_EQ(parent_edges, edges);
  }
}

TEST(TrajectoryTest, FeasibilityAndDynamicsProbability) {
  Mdp mdp(3, 1, {0.5, 0.5, 0}, {0, 0.25, 0.75, 0, 0, 1, 0, 0, 1}, 1.0, {2});
  const StateIndex states[] = {0, 2};
  const ActionIndex actions[] = {0};
  Trajectory ok = make_trajectory(states, actions);
  EXPECT_TRUE(is_feasible(mdp, ok));
  EXPECT_NEAR(log_dynamics_probability(mdp, ok), std::log(0.5 * 0.75), 1e-15);

  const StateIndex bad_states[] = {2, 2};
  Trajectory from_terminal = make_trajectory(bad_states, actions);
  EXPECT_FALSE(is_feasible(mdp, from_terminal));
  EXPECT_THROW(validate_trajectory(mdp, from_terminal), std::invalid_argument);

  const StateIndex unstartable[] = {2};
  EXPECT_FALSE(is_feasible(mdp, make_trajectory(unstartable, {})));
}

TEST(TrajectoryTest, DatasetRejectsEmpty) {
  EXPECT_THROW(Dataset(std::vector<Trajectory>{}), std::invalid_argument);
  EXPECT_EQ(chain_prefixes().max_length(), 4u);
}

TEST(PadMdpTest, FourStateChain) {
  Environment env = make_linear_chain(4);
  PaddedMdp padded = pad_mdp(env.mdp);
  const Mdp& p = padded.mdp;
  EXPECT_EQ(p.num_states(), 5);
  EXPECT_EQ(p.num_actions(), 2);
  EXPECT_EQ(padded.aux_state, 4);
  EXPECT_EQ(padded.aux_action, 1);
  EXPECT_FALSE(p.episodic());
  EXPECT_EQ(p.start(4), 0.0);
  // The former terminal now moves into the auxiliary state.
  EXPECT_TRUE(has_child(padded.adjacency, 3, 0, 4));
  for (StateIndex s = 0; s < 5; ++s) {
    EXPECT_TRUE(has_child(padded.adjacency, s, 1, 4)) << s;
  }
  ASSERT_EQ(padded.adjacency.children[4].size(), 2u);
  EXPECT_EQ(p.transition(0, 0, 1), 1.0);
}

// Structural rules of the padded MDP, checked on random inputs.
TEST(PadMdpTest, RulesHoldOnRandomMdps) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomMdpOptions opt;
    opt.num_terminal = static_cast<int>(seed % 3);
    opt.invalid_fraction = 0.25;
    Mdp mdp = make_random_mdp(5, 2, 3, seed, opt);
    PaddedMdp padded = pad_mdp(mdp);
    const Mdp& p = padded.mdp;
    const StateIndex sa = padded.aux_state;
    const ActionIndex aa = padded.aux_action;
    EXPECT_EQ(p.start(sa), 0.0);
    for (ActionIndex a = 0; a <= aa; ++a) EXPECT_EQ(p.transition(sa, a, sa), 1.0);
    for (StateIndex s = 0; s <= sa; ++s) {
      EXPECT_EQ(p.transition(s, aa, sa), 1.0);
      for (ActionIndex a = 0; a <= aa; ++a) {
        if (!p.row_valid(s, a)) continue;
        double total = 0.0;
        for (double x : p.transition_row(s, a)) total += x;
        EXPECT_NEAR(total, 1.0, kStochasticTolerance);
      }
    }
    for (StateIndex s : mdp.terminal_states()) {
      for (ActionIndex a = 0; a < aa; ++a) EXPECT_EQ(p.transition(s, a, sa), 1.0);
    }
    // Children of the auxiliary state and parents of it.
    ASSERT_EQ(padded.adjacency.children[sa].size(), static_cast<std::size_t>(aa + 1));
    for (const auto& e : padded.adjacency.parents[sa]) {
      EXPECT_TRUE(e.action == aa || e.state == sa || mdp.is_terminal(e.state));
    }
    // Original non-terminal dynamics unchanged.
    for (StateIndex s = 0; s < mdp.num_states(); ++s) {
      if (mdp.is_terminal(s)) continue;
      for (ActionIndex a = 0; a < mdp.num_actions(); ++a) {
        for (StateIndex next = 0; next < mdp.num_states(); ++next) {
          EXPECT_EQ(p.transition(s, a, next), mdp.transition(s, a, next));
        }
      }
    }
  }
}

TEST(PadMdpTest, ContinuingMdpOnlyGainsAuxiliaryMoves) {
  Mdp mdp = make_random_mdp(4, 2, 2, 7);
  ASSERT_FALSE(mdp.episodic());
  PaddedMdp padded = pad_mdp(mdp);
  for (StateIndex s = 0; s < 4; ++s) {
    for (ActionIndex a = 0; a < 2; ++a) {
      EXPECT_EQ(padded.mdp.transition(s, a, padded.aux_state), 0.0);
    }
  }
}

// Padding an already padded MDP adds exactly one new absorbing state.
TEST(PadMdpTest, RepaddingAddsOneAbsorbingState) {
  Mdp mdp = make_random_mdp(4, 2, 2, 3, {.num_terminal = 1});
  PaddedMdp once = pad_mdp(mdp);
  PaddedMdp twice = pad_mdp(once.mdp);
  EXPECT_EQ(twice.mdp.num_states(), once.mdp.num_states() + 1);
  for (StateIndex s = 0; s < once.mdp.num_states(); ++s) {
    for (ActionIndex a = 0; a < once.mdp.num_actions(); ++a) {
      for (StateIndex next = 0; next < once.mdp.num_states(); ++next) {
        EXPECT_EQ(twice.mdp.transition(s, a, next),
                  once.mdp.transition(s, a, next));
      }
    }
  }
}

TEST(PadMdpTest, GridworldRowsStayStochastic) {
  Environment env = make_gridworld(frozen_lake_4x4(), 2.0 / 3.0);
  PaddedMdp padded = pad_mdp(env.mdp);
  for (StateIndex s = 0; s < padded.mdp.num_states(); ++s) {
    for (ActionIndex a = 0; a < padded.mdp.num_actions(); ++a) {
      double total = 0.0;
      for (double x : padded.mdp.transition_row(s, a)) total += x;
      EXPECT_NEAR(total, 1.0, 1e-12) << s << "," << a;
    }
  }
}

TEST(PadDatasetTest, ExtendsShortTrajectory) {
  Environment env = make_linear_chain(4);
  PaddedMdp padded = pad_mdp(env.mdp);
  const StateIndex states[] = {0, 1};
  const ActionIndex actions[] = {0};
  Dataset data({make_trajectory(states, actions)});
  Dataset out = pad_dataset(data, padded, 4);
  EXPECT_THAT(out[0].steps, ElementsAre(Step{0, 0}, Step{1, 1}, Step{4, 1},
                                        Step{4, kNoAction}));
  for (const auto& traj : out) EXPECT_TRUE(is_feasible(padded.mdp, traj));
}

TEST(PadDatasetTest, ChainPrefixesAllReachLengthFour) {
  Environment env = make_linear_chain(4);
  PaddedMdp padded = pad_mdp(env.mdp);
  Dataset data = chain_prefixes();
  Dataset out = pad_dataset(data, padded, 4);
  ASSERT_EQ(out.size(), data.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].length(), 4u);
    EXPECT_TRUE(is_feasible(padded.mdp, out[i]));
    // Original prefix kept verbatim apart from the final action.
    for (std::size_t t = 0; t + 1 < data[i].length(); ++t) {
      EXPECT_EQ(out[i].steps[t], data[i].steps[t]);
    }
  }
  EXPECT_EQ(out[3], data[3]);
}

TEST(PadDatasetTest, RejectsTrajectoryLongerThanLength) {
  Environment env = make_linear_chain(4);
  PaddedMdp padded = pad_mdp(env.mdp);
  EXPECT_THROW(pad_dataset(chain_prefixes(), padded, 3), std::invalid_argument);
}

}  // namespace
}  // namespace maxent
