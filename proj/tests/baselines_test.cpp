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

#include <cmath>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "maxent/baselines.hpp"
#include "maxent/environments.hpp"
#include "maxent/inference.hpp"
#include "maxent/learning.hpp"
#include "maxent/logspace.hpp"
#include "test_support.hpp"

namespace maxent {
namespace {

using ::testing::UnorderedElementsAreArray;
using testing::chain_prefixes;
using testing::random_problem;
using testing::RandomProblem;

// Uniform start and uniform transitions over every state.
Mdp uniform_mdp(int n, int na) {
  std::vector<double> start(n, 1.0 / n);
  std::vector<double> t(static_cast<std::size_t>(n) * na * n, 1.0 / n);
  return Mdp(n, na, std::move(start), std::move(t), 1.0, {});
}

TEST(EnumerateTest, ChainHasFourPaths) {
  Environment env = make_linear_chain(4);
  EnumeratedEnsemble ens =
      enumerate_ensemble(env.mdp, env.features, env.features.zero_params(), 4);
  std::vector<Trajectory> found;
  for (const auto& p : ens.paths) found.push_back(p.traj);
  EXPECT_THAT(found, UnorderedElementsAreArray(chain_prefixes().trajectories()));
  EXPECT_NEAR(ens.log_z, std::log(4.0), 1e-15);
}

TEST(EnumerateTest, SingleAbsorbingState) {
  Mdp mdp(1, 1, {1.0}, {1.0}, 1.0, {});
  FeatureSet feats = FeatureSet::state_indicators(1, 1);
  EnumeratedEnsemble ens = enumerate_ensemble(mdp, feats, feats.zero_params(), 3);
  ASSERT_EQ(ens.paths.size(), 3u);
  for (const auto& p : ens.paths) {
    for (const auto& step : p.traj.steps) EXPECT_EQ(step.state, 0);
  }
}

TEST(EnumerateTest, NormalizedWeightsSumToOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomProblem p = random_problem(seed, 2.0);
    EnumeratedEnsemble ens = enumerate_ensemble(p.mdp, p.feats, p.params, p.length);
    double total = 0.0;
    for (const auto& path : ens.paths) total += std::exp(path.log_weight - ens.log_z);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(EnumerateTest, GuardRejectsLargeEnsembles) {
  Mdp mdp = uniform_mdp(4, 3);
  FeatureSet feats = FeatureSet::state_indicators(4, 3);
  EXPECT_THROW(enumerate_ensemble(mdp, feats, feats.zero_params(), 6, 1000),
               std::length_error);
}

TEST(OracleTest, ChainMarginal) {
  Environment env = make_linear_chain(4);
  MarginalSet m = oracle_marginals(
      enumerate_ensemble(env.mdp, env.features, env.features.zero_params(), 4));
  EXPECT_NEAR(m.state(2, 1), 0.75, 1e-15);
}

TEST(OracleTest, ChainRuleHolds) {
  RandomProblem p = random_problem(5);
  MarginalSet m = oracle_marginals(enumerate_ensemble(p.mdp, p.feats, p.params, p.length));
  for (int t = 1; t < p.length; ++t) {
    for (StateIndex s = 0; s < p.mdp.num_states(); ++s) {
      for (ActionIndex a = 0; a < p.mdp.num_actions(); ++a) {
        double total = 0.0;
        for (StateIndex next = 0; next < p.mdp.num_states(); ++next) {
          total += m.transition(t, s, a, next);
        }
        EXPECT_NEAR(total, m.state_action(t, s, a), 1e-12);
      }
    }
  }
}

class ZiebartVariantTest : public ::testing::TestWithParam<ZiebartVariant> {};

// Uniform dynamics make the approximate visitation ignore the reward, up to
// rounding accumulated over the horizon.
TEST_P(ZiebartVariantTest, UniformDynamicsGiveUniformVisitation) {
  Mdp mdp = uniform_mdp(3, 2);
  for (const std::vector<double>& reward :
       {std::vector<double>{0, 1, 5}, std::vector<double>{-3, 0, 7},
        std::vector<double>{0, 0, 0}}) {
    ApproxMarginals d = ziebart_marginals(GetParam(), mdp, reward, 5);
    for (StateIndex s = 0; s < 3; ++s) {
      for (int t = 1; t <= 5; ++t) EXPECT_NEAR(d.d(s, t), 1.0 / 3.0, 1e-14);
    }
  }
}

TEST_P(ZiebartVariantTest, FirstStepSumsToOne) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Mdp mdp = make_random_mdp(5, 2, 3, seed, {.num_terminal = 1});
    std::vector<double> reward = {0.5, -1, 2, 0, 1};
    ApproxMarginals d = ziebart_marginals(GetParam(), mdp, reward, 4);
    double total = 0.0;
    for (StateIndex s = 0; s < 5; ++s) total += d.d(s, 1);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST_P(ZiebartVariantTest, GradientIgnoresRewardUnderUniformDynamics) {
  Mdp mdp = uniform_mdp(3, 2);
  FeatureSet feats = FeatureSet::state_indicators(3, 2);
  const StateIndex states[] = {2, 2, 2};
  const ActionIndex actions[] = {0, 1};
  Dataset data({make_trajectory(states, actions)});
  OptimizerConfig config;
  config.method = OptimizerMethod::kGradientAscent;
  config.max_iters = 20;
  config.step_size = 0.5;
  LearnResult r = approx_irl_learn(mdp, feats, data, GetParam(), config);
  ASSERT_GE(r.trace.size(), 2u);
  // The model side never moves, so the gradient stays at its initial value.
  for (const auto& rec : r.trace) {
    EXPECT_NEAR(rec.grad_norm, r.trace.front().grad_norm, 1e-12);
  }
  EXPECT_FALSE(r.converged);
}

TEST_P(ZiebartVariantTest, RejectsStateActionFeatures) {
  Environment env = make_nchain(4, 0.2);
  Dataset data({make_trajectory(std::vector<StateIndex>{0}, {})});
  EXPECT_THROW(approx_irl_learn(env.mdp, env.features, data, GetParam(), {}),
               std::invalid_argument);
}

INSTANTIATE_TEST_SUITE_P(Variants, ZiebartVariantTest,
                         ::testing::Values(ZiebartVariant::k2008, ZiebartVariant::k2010),
                         [](const auto& info) {
                           return info.param == ZiebartVariant::k2008 ? "Y2008" : "Y2010";
                         });

TEST(ZiebartTest, ExactMarginalsDependOnReward) {
  Mdp mdp = uniform_mdp(3, 2);
  FeatureSet feats = FeatureSet::state_indicators(3, 2);
  RewardParams params = feats.zero_params();
  params.s = {0, 1, 5};
  ExactInference inf(mdp, feats, 5);
  MarginalSet m = inf.evaluate(params, InferenceMethod::kPadded).marginals;
  double worst = 0.0;
  for (int t = 1; t <= 5; ++t) {
    double mass = 0.0;
    for (StateIndex s = 0; s < 3; ++s) mass += m.state(t, s);
    for (StateIndex s = 0; s < 3; ++s) {
      worst = std::max(worst, std::abs(m.state(t, s) / mass - 1.0 / 3.0));
    }
  }
  EXPECT_GT(worst, 0.01);
}

TEST(ZiebartTest, RevisedUpdateFollowsDeterministicChain) {
  Environment env = make_linear_chain(4);
  std::vector<double> reward(4, 0.0);
  ApproxMarginals d = ziebart2010_marginals(env.mdp, reward, 4);
  for (int t = 1; t <= 4; ++t) {
    for (StateIndex s = 0; s < 4; ++s) {
      EXPECT_NEAR(d.d(s, t), s == t - 1 ? 1.0 : 0.0, 1e-15) << s << "," << t;
    }
  }
}

TEST(ZiebartTest, ApproximateGradientDiffersFromExact) {
  Mdp mdp = uniform_mdp(3, 2);
  FeatureSet feats = FeatureSet::state_indicators(3, 2);
  RewardParams params = feats.zero_params();
  params.s = {0, 1, 5};
  ExactInference inf(mdp, feats, 5);
  ParamBlocks exact =
      model_expectations(inf.evaluate(params, InferenceMethod::kPadded).marginals, feats);
  ParamBlocks approx = approx_feature_expectations(
      ziebart2010_marginals(mdp, params.s, 5), feats);
  EXPECT_GT((exact - approx).max_abs(), 0.1);
}

}  // namespace
}  // namespace maxent
