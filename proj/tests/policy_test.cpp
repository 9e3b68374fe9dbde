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
#include <limits>
#include <queue>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "json.hpp"
#include "maxent/baselines.hpp"
#include "maxent/environments.hpp"
#include "maxent/io.hpp"
#include "maxent/logspace.hpp"
#include "maxent/policy.hpp"
#include "test_support.hpp"

namespace maxent {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Pointwise;
using testing::fixture_path;
using testing::random_problem;
using testing::RandomProblem;

RewardTables state_reward(int n, int na, std::vector<double> r) {
  FeatureSet feats = FeatureSet::state_indicators(n, na);
  RewardParams p = feats.zero_params();
  p.s = std::move(r);
  return evaluate_rewards(feats, p);
}

RewardTables random_reward(const Mdp& mdp, std::uint64_t seed) {
  FeatureSet feats = make_random_features(mdp.num_states(), mdp.num_actions(), 2, 2, 1, seed);
  return evaluate_rewards(feats, make_random_params(feats, 1.0, seed + 1));
}

Policy random_policy(const Mdp& mdp, std::uint64_t seed) {
  Policy pi = Policy::uniform(mdp);
  Rng rng(seed);
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    double total = 0.0;
    for (ActionIndex a = 0; a < mdp.num_actions(); ++a) {
      auto& p = pi.action_probs[s * mdp.num_actions() + a];
      if (p > 0.0) p = uniform01(rng) + 0.01;
      total += p;
    }
    for (ActionIndex a = 0; a < mdp.num_actions(); ++a) {
      if (total > 0.0) pi.action_probs[s * mdp.num_actions() + a] /= total;
    }
  }
  return pi;
}

TEST(ValueIterationTest, SingleStateGeometricSeries) {
  Mdp mdp(1, 1, {1.0}, {1.0}, 0.9, {});
  ValueIterationResult vi = value_iteration(mdp, state_reward(1, 1, {1.0}));
  EXPECT_NEAR(vi.value.v[0], 10.0, 1e-8);
}

TEST(ValueIterationTest, EpisodicChain) {
  Environment env = make_linear_chain(4);
  ValueIterationResult vi =
      value_iteration(env.mdp, evaluate_rewards(env.features, env.reward));
  EXPECT_THAT(vi.value.v, ElementsAre(1.0, 1.0, 1.0, 1.0));
  for (StateIndex s = 0; s < 3; ++s) EXPECT_EQ(vi.policy.action(s), 0);
  EXPECT_EQ(vi.policy.action(3), kNoAction);
}

TEST(ValueIterationTest, BellmanResidualAndGreedyFixedPoint) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Mdp mdp = make_random_mdp(6, 3, 3, seed, {.num_terminal = 1, .discount = 0.9,
                                               .invalid_fraction = 0.2});
    RewardTables r = random_reward(mdp, seed);
    ValueIterationResult vi = value_iteration(mdp, r);
    for (StateIndex s = 0; s < 6; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      ActionIndex arg = kNoAction;
      for (ActionIndex a = 0; a < 3; ++a) {
        if (!mdp.can_act(s, a)) continue;
        const double q = q_value(mdp, r, vi.value.v, s, a);
        if (q > best + 1e-12) {
          best = q;
          arg = a;
        }
      }
      if (arg == kNoAction) continue;
      EXPECT_NEAR(vi.value.v[s], best, 1e-9);
      EXPECT_EQ(vi.policy.action(s), arg);
    }
  }
}

TEST(ValueIterationTest, DivergesOnImproperUndiscountedLoop) {
  Mdp mdp(1, 1, {1.0}, {1.0}, 1.0, {});
  EXPECT_THROW(value_iteration(mdp, state_reward(1, 1, {1.0})), std::runtime_error);
}

TEST(PolicyValueTest, OptimalPolicyMatchesValueIteration) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Mdp mdp = make_random_mdp(5, 2, 2, seed, {.discount = 0.95});
    RewardTables r = random_reward(mdp, seed);
    ValueIterationResult vi = value_iteration(mdp, r);
    EXPECT_THAT(policy_value(mdp, r, vi.policy).v, Pointwise(DoubleNear(1e-8), vi.value.v));
  }
}

TEST(PolicyValueTest, UniformPolicyTwoStates) {
  // a0 stays, a1 swaps.
  Mdp mdp(2, 2, {1, 0}, {1, 0, 0, 1, 0, 1, 1, 0}, 0.5, {});
  ValueFunction v = policy_value(mdp, state_reward(2, 2, {0, 1}), Policy::uniform(mdp));
  EXPECT_NEAR(v.v[0], 0.5, 1e-12);
  EXPECT_NEAR(v.v[1], 1.5, 1e-12);
}

TEST(PolicyValueTest, NoPolicyBeatsTheOptimum) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Mdp mdp = make_random_mdp(5, 3, 2, seed, {.num_terminal = 1, .discount = 0.9});
    RewardTables r = random_reward(mdp, seed);
    ValueIterationResult vi = value_iteration(mdp, r);
    for (std::uint64_t k = 0; k < 5; ++k) {
      ValueFunction v = policy_value(mdp, r, random_policy(mdp, seed * 10 + k));
      for (StateIndex s = 0; s < 5; ++s) EXPECT_LE(v.v[s], vi.value.v[s] + 1e-9);
    }
  }
}

TEST(PolicyValueTest, SingularSystemThrows) {
  Mdp mdp(2, 1, {1, 0}, {0, 1, 1, 0}, 1.0, {});
  EXPECT_THROW(policy_value(mdp, state_reward(2, 1, {1, 1}), Policy::uniform(mdp)),
               std::runtime_error);
}

TEST(IleTest, IdenticalRewardsGiveZero) {
  Environment env = make_gridworld(frozen_lake_4x4(), 2.0 / 3.0);
  RewardTables gt = evaluate_rewards(env.features, env.reward);
  EXPECT_EQ(ile(env.mdp, gt, gt), 0.0);
}

TEST(IleTest, PositiveAffineRewardGivesZero) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Mdp mdp = make_random_mdp(6, 3, 3, seed, {.discount = 0.9});
    FeatureSet feats = FeatureSet::state_action_indicators(6, 3);
    RewardParams gt = make_random_params(feats, 1.0, seed);
    RewardParams affine = gt;
    for (double& v : affine.sa) v = 2.0 * v + 3.0;
    EXPECT_EQ(ile(mdp, evaluate_rewards(feats, gt), evaluate_rewards(feats, affine)), 0.0);
  }
}

TEST(IleTest, NegatedRewardOnTwoGoalCorridor) {
  Environment env = make_gridworld({"HFFSFFG"}, 0.0, 0.9);
  RewardParams two_goals = env.features.zero_params();
  two_goals.s[0] = 1.0;
  two_goals.s[6] = 1.0;
  RewardParams negated = two_goals;
  for (double& v : negated.s) v = -v;
  EXPECT_GT(ile(env.mdp, evaluate_rewards(env.features, two_goals),
                evaluate_rewards(env.features, negated)),
            0.0);
}

TEST(RolloutTest, DeterministicSystemGivesIdenticalRollouts) {
  Environment env = make_gridworld({"SFFG"}, 0.0);
  ValueIterationResult vi =
      value_iteration(env.mdp, evaluate_rewards(env.features, env.reward));
  Dataset d = sample_rollouts(env.mdp, vi.policy, 20, 10, 3);
  for (const auto& t : d) EXPECT_EQ(t, d[0]);
  EXPECT_EQ(d[0].last_state(), 3);
}

TEST(RolloutTest, ContinuingRolloutsTruncate) {
  Environment env = make_nchain(5, 0.2);
  Dataset d = sample_rollouts(env.mdp, Policy::uniform(env.mdp), 30, 17, 1);
  for (const auto& t : d) EXPECT_EQ(t.length(), 17u);
}

TEST(RolloutTest, SameSeedSameRollouts) {
  Environment env = make_gridworld(frozen_lake_4x4(), 2.0 / 3.0);
  Policy pi = Policy::uniform(env.mdp);
  Dataset a = sample_rollouts(env.mdp, pi, 50, 30, 42);
  Dataset b = sample_rollouts(env.mdp, pi, 50, 30, 42);
  EXPECT_EQ(a.trajectories(), b.trajectories());
}

TEST(RolloutTest, VisitationMatchesOccupancy) {
  Mdp mdp = make_random_mdp(5, 2, 3, 4, {.num_terminal = 1, .discount = 0.9});
  Policy pi = random_policy(mdp, 2);
  const int max_len = 8;
  const std::size_t n = 100000;
  // Expected visits by propagating the state distribution step by step.
  std::vector<double> d(mdp.start_dist().begin(), mdp.start_dist().end());
  std::vector<double> expect(5, 0.0);
  for (int t = 1; t <= max_len; ++t) {
    std::vector<double> next(5, 0.0);
    for (StateIndex s = 0; s < 5; ++s) {
      expect[s] += d[s];
      if (mdp.is_terminal(s)) continue;
      for (ActionIndex a = 0; a < 2; ++a) {
        for (StateIndex s2 = 0; s2 < 5; ++s2) {
          next[s2] += d[s] * pi.prob(s, a) * mdp.transition(s, a, s2);
        }
      }
    }
    d = next;
  }
  Dataset data = sample_rollouts(mdp, pi, n, max_len, 11);
  std::vector<double> sum(5, 0.0), sum2(5, 0.0);
  for (const auto& traj : data) {
    std::vector<double> c(5, 0.0);
    for (const auto& step : traj.steps) c[step.state] += 1.0;
    for (int s = 0; s < 5; ++s) {
      sum[s] += c[s];
      sum2[s] += c[s] * c[s];
    }
  }
  for (int s = 0; s < 5; ++s) {
    const double mean = sum[s] / n;
    const double sd = std::sqrt(std::max(0.0, sum2[s] / n - mean * mean));
    EXPECT_LE(std::abs(mean - expect[s]), 3.0 * sd / std::sqrt(double(n)) + 1e-12) << s;
  }
}

TEST(RolloutTest, GridworldSuccessRateIsPinned) {
  const auto fixture = nlohmann::json::parse(read_text(fixture_path("gridworld_4x4.json")));
  const auto& env_j = fixture.at("env");
  Environment env = make_gridworld(env_j.at("layout").get<std::vector<std::string>>(),
                                   env_j.at("slip").get<double>(),
                                   env_j.at("discount").get<double>());
  ValueIterationResult vi =
      value_iteration(env.mdp, evaluate_rewards(env.features, env.reward));
  const auto policy = fixture.at("optimal_policy").get<std::vector<int>>();
  for (StateIndex s = 0; s < 16; ++s) EXPECT_EQ(vi.policy.action(s), policy[s]) << s;
  const auto& rate = fixture.at("success_rate");
  Dataset d = sample_rollouts(env.mdp, vi.policy, rate.at("rollouts").get<std::size_t>(),
                              rate.at("max_len").get<int>(), rate.at("seed").get<std::uint64_t>());
  int ok = 0;
  for (const auto& t : d) ok += t.last_state() == 15;
  const double measured = ok / static_cast<double>(d.size());
  EXPECT_DOUBLE_EQ(measured, rate.at("value").get<double>());
  EXPECT_NEAR(measured, 0.82, 0.05);
}

TEST(ViterbiTest, ChainHasOnePath) {
  Environment env = make_linear_chain(4);
  RewardTables r = evaluate_rewards(env.features, env.reward);
  const double f[] = {1, 0, 0, 0};
  const double g[] = {0, 0, 0, 1};
  Trajectory best = viterbi_ml_path(env.mdp, r, f, g, 4);
  EXPECT_EQ(best, testing::chain_prefixes()[3]);
  EXPECT_THROW(viterbi_ml_path(env.mdp, r, f, g, 3), std::domain_error);
}

// On deterministic dynamics with non-positive rewards the most likely path
// is a shortest path under costs -R.
TEST(ViterbiTest, DeterministicMatchesShortestPath) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 7, na = 3;
    Mdp mdp = make_random_mdp(n, na, 1, seed, {.discount = 1.0});
    FeatureSet feats = FeatureSet::state_action_indicators(n, na);
    RewardParams params = make_random_params(feats, 1.0, seed);
    for (double& v : params.sa) v = -std::abs(v);
    RewardTables r = evaluate_rewards(feats, params);
    std::vector<double> dist(n, INFINITY);
    dist[0] = 0.0;
    using Item = std::pair<double, StateIndex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, 0});
    while (!pq.empty()) {
      auto [c, s] = pq.top();
      pq.pop();
      if (c > dist[s]) continue;
      for (ActionIndex a = 0; a < na; ++a) {
        for (StateIndex s2 = 0; s2 < n; ++s2) {
          if (mdp.transition(s, a, s2) != 1.0) continue;
          if (c - r.sa(s, a) < dist[s2]) {
            dist[s2] = c - r.sa(s, a);
            pq.push({dist[s2], s2});
          }
        }
      }
    }
    std::vector<double> f(n, 0.0);
    f[0] = 1.0;
    for (StateIndex goal = 1; goal < n; ++goal) {
      std::vector<double> g(n, 0.0);
      g[goal] = 1.0;
      if (!std::isfinite(dist[goal])) {
        EXPECT_THROW(viterbi_ml_path(mdp, r, f, g, n), std::domain_error);
        continue;
      }
      Trajectory best = viterbi_ml_path(mdp, r, f, g, n);
      EXPECT_NEAR(viterbi_score(mdp, r, f, g, best), -dist[goal], 1e-10);
    }
  }
}

TEST(ViterbiTest, MatchesEnumerationArgmax) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomProblem p = random_problem(seed, 1.5);
    const int n = p.mdp.num_states();
    RewardTables r = evaluate_rewards(p.feats, p.params);
    Rng rng(seed);
    std::vector<double> f(n), g(n);
    for (double& x : f) x = uniform01(rng) < 0.6 ? uniform01(rng) : 0.0;
    for (double& x : g) x = uniform01(rng) < 0.6 ? uniform01(rng) : 0.0;
    f[0] += 0.1;
    g[0] += 0.1;
    EnumeratedEnsemble ens = enumerate_ensemble(p.mdp.with_start(std::vector<double>(n, 1.0 / n)),
                                                r, p.length);
    double best = kLogZero;
    for (const auto& path : ens.paths) {
      const double score = path.log_weight + std::log(static_cast<double>(n)) +
                           safe_log(f[path.traj.first_state()]) +
                           safe_log(g[path.traj.last_state()]);
      best = std::max(best, score);
    }
    Trajectory viterbi = viterbi_ml_path(p.mdp, r, f, g, p.length);
    EXPECT_NEAR(viterbi_score(p.mdp, r, f, g, viterbi), best, 1e-10) << "seed " << seed;
    EXPECT_LE(viterbi.length(), static_cast<std::size_t>(p.length));
  }
}

TEST(DestinationTest, ChainSupportIsReachable) {
  Environment env = make_linear_chain(4);
  RewardTables r = evaluate_rewards(env.features, env.features.zero_params());
  const double prior[] = {0.25, 0.25, 0.25, 0.25};
  std::vector<double> post =
      destination_posterior(env.mdp, r, testing::chain_prefixes()[1], prior, 4);
  EXPECT_EQ(post[0], 0.0);
  EXPECT_THAT(post, Pointwise(DoubleNear(1e-12), std::vector<double>{0, 1.0 / 3, 1.0 / 3, 1.0 / 3}));
}

TEST(DestinationTest, ZeroRewardChainFollowsPrior) {
  Environment env = make_linear_chain(5);
  RewardTables r = evaluate_rewards(env.features, env.features.zero_params());
  const double prior[] = {0.1, 0.4, 0.2, 0.2, 0.1};
  std::vector<double> post =
      destination_posterior(env.mdp, r, testing::chain_prefixes(5)[1], prior, 5);
  const double z = 0.4 + 0.2 + 0.2 + 0.1;
  EXPECT_THAT(post, Pointwise(DoubleNear(1e-12),
                              std::vector<double>{0, 0.4 / z, 0.2 / z, 0.2 / z, 0.1 / z}));
}

TEST(DestinationTest, MatchesEnumeration) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomProblem p = random_problem(seed, 1.0, 5, 2, 5);
    Mdp mdp = p.mdp.with_discount(1.0);
    const int n = mdp.num_states();
    RewardTables r = evaluate_rewards(p.feats, p.params);
    Rng rng(seed + 3);
    Trajectory walk = testing::random_walk(mdp, rng, 3);
    if (walk.length() < 2) continue;
    const int length = 5;
    const int k = static_cast<int>(walk.length());
    std::vector<double> prior(n);
    for (double& x : prior) x = 0.1 + uniform01(rng);
    double total = 0.0;
    for (double x : prior) total += x;
    for (double& x : prior) x /= total;

    const auto point = [&](StateIndex s) {
      std::vector<double> d(n, 0.0);
      d[s] = 1.0;
      return d;
    };
    EnumeratedEnsemble num = enumerate_ensemble(mdp.with_start(point(walk.last_state())), r,
                                                length - k + 1);
    EnumeratedEnsemble den = enumerate_ensemble(mdp.with_start(point(walk.first_state())), r,
                                                length);
    std::vector<LogSumExp> a(n), b(n);
    for (const auto& path : num.paths) a[path.traj.last_state()].add(path.log_weight);
    for (const auto& path : den.paths) b[path.traj.last_state()].add(path.log_weight);
    std::vector<double> expect(n, 0.0);
    LogSumExp norm;
    std::vector<double> logs(n, kLogZero);
    for (StateIndex s = 0; s < n; ++s) {
      if (a[s].value() == kLogZero) continue;
      logs[s] = a[s].value() - b[s].value() + std::log(prior[s]);
      norm.add(logs[s]);
    }
    for (StateIndex s = 0; s < n; ++s) expect[s] = std::exp(logs[s] - norm.value());
    std::vector<double> post = destination_posterior(mdp, r, walk, prior, length);
    EXPECT_THAT(post, Pointwise(DoubleNear(1e-9), expect)) << "seed " << seed;
    double sum = 0.0;
    for (double x : post) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(DestinationTest, RejectsInfeasiblePrefix) {
  Environment env = make_linear_chain(4);
  RewardTables r = evaluate_rewards(env.features, env.features.zero_params());
  const double prior[] = {0.25, 0.25, 0.25, 0.25};
  const StateIndex states[] = {0, 2};
  const ActionIndex actions[] = {0};
  EXPECT_THROW(destination_posterior(env.mdp, r, make_trajectory(states, actions), prior, 4),
               std::invalid_argument);
}

}  // namespace
}  // namespace maxent
