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
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "maxent/experiments.hpp"
#include "maxent/io.hpp"
#include "maxent/policy.hpp"
#include "test_support.hpp"

namespace maxent {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::StartsWith;

TEST(AlgorithmNameTest, RoundTripsEveryName) {
  for (Algorithm a : {Algorithm::kExactPadded, Algorithm::kExactPoly,
                      Algorithm::kZiebart2008, Algorithm::kZiebart2010,
                      Algorithm::kImportanceSampling}) {
    EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  }
  EXPECT_THROW(parse_algorithm("exact"), std::invalid_argument);
}

TEST(RunConfigTest, ResolvesPathsAgainstBaseDir) {
  RunConfig c = parse_run_config(
      R"({"mdp": "m.json", "features": "/abs/f.json", "trajectories": "t.txt",
          "algorithm": "exact-poly", "optimizer": {"method": "gradient-ascent",
          "step_size": 0.5}, "seed": 7})",
      "/data/run");
  EXPECT_EQ(c.mdp_path, "/data/run/m.json");
  EXPECT_EQ(c.features_path, "/abs/f.json");
  EXPECT_EQ(c.trajectories_path, "/data/run/t.txt");
  EXPECT_EQ(c.algorithm, Algorithm::kExactPoly);
  EXPECT_EQ(c.optimizer.method, OptimizerMethod::kGradientAscent);
  EXPECT_EQ(c.optimizer.step_size, 0.5);
  EXPECT_EQ(c.seed, 7u);
}

TEST(RunConfigTest, NChainDefaults) {
  RunConfig c = parse_run_config(R"({"env": {"kind": "nchain"}})");
  ASSERT_TRUE(c.env.has_value());
  EXPECT_EQ(c.env->size, 10);
  EXPECT_EQ(c.env->slip, 0.2);
}

TEST(RunConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_run_config(R"({"sead": 1})"), std::invalid_argument);
  EXPECT_THROW(parse_run_config(R"({"env": {"kind": "gridworld", "slipp": 0.1}})"),
               std::invalid_argument);
  EXPECT_THROW(parse_run_config(R"({"optimizer": {"method": "newton"}})"),
               std::invalid_argument);
  EXPECT_THROW(parse_run_config(R"({"repeats": 0})"), std::invalid_argument);
  EXPECT_THROW(parse_run_config(R"({"n_paths": [1, 0]})"), std::invalid_argument);
  EXPECT_THROW(parse_run_config(R"({"importance": {"stop_prob": 1.0}})"),
               std::invalid_argument);
  EXPECT_THROW(parse_run_config(R"({"bench": {"lengths": []}})"), std::invalid_argument);
  EXPECT_THROW(parse_run_config("[1, 2]"), std::invalid_argument);
}

TEST(RunConfigTest, FixtureConfigsParse) {
  for (const char* name : {"chain4_learn.json", "gridworld_recovery.json",
                           "nchain_recovery.json", "bench_random.json"}) {
    const std::string path = testing::fixture_path(name);
    EXPECT_NO_THROW(parse_run_config(read_text(path))) << name;
  }
}

TEST(DemonstrationTest, SuccessFilterKeepsGoalPaths) {
  Environment env = make_gridworld(frozen_lake_4x4(), 2.0 / 3.0);
  Dataset d = sample_demonstrations(env, 20, 100, true, 4);
  ASSERT_EQ(d.size(), 20u);
  for (const auto& t : d) EXPECT_EQ(t.last_state(), 15);
  Dataset again = sample_demonstrations(env, 20, 100, true, 4);
  EXPECT_EQ(d.trajectories(), again.trajectories());
}

TEST(EvaluateLogLikelihoodTest, ChainUniform) {
  Environment env = make_linear_chain(4);
  EXPECT_NEAR(evaluate_log_likelihood(env.mdp, env.features, env.features.zero_params(),
                                      testing::chain_prefixes(), 4),
              -std::log(4.0), 1e-12);
}

RunConfig small_recovery() {
  RunConfig c;
  c.algorithms = {Algorithm::kExactPadded, Algorithm::kZiebart2008};
  c.n_paths = {1, 5};
  c.repeats = 2;
  c.max_len = 20;
  c.heldout_paths = 5;
  c.seed = 3;
  return c;
}

TEST(RewardRecoveryTest, RowsAreSortedAndDeterministic) {
  EnvSpec spec;
  Environment env = make_environment(spec);
  RunConfig c = small_recovery();
  auto rows = run_reward_recovery(env, c);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0].algorithm, "exact-padded");
  EXPECT_EQ(rows[0].n_paths, 1);
  EXPECT_EQ(rows[1].repeat, 1);
  EXPECT_EQ(rows[4].algorithm, "ziebart2008");
  for (const auto& r : rows) {
    EXPECT_GE(r.ile, 0.0);
    EXPECT_TRUE(std::isfinite(r.heldout_loglik));
    EXPECT_LE(r.loglik, 0.0);
  }
  c.threads = 2;
  EXPECT_EQ(recovery_csv(run_reward_recovery(env, c)), recovery_csv(rows));
  EXPECT_THAT(recovery_csv(rows),
              StartsWith("algorithm,repeat,n_paths,ile,loglik,heldout_loglik,converged\n"));
}

TEST(RewardRecoveryTest, NoHeldoutGivesNaN) {
  Environment env = make_linear_chain(4);
  RunConfig c = small_recovery();
  c.algorithms = {Algorithm::kExactPadded};
  c.heldout_paths = 0;
  c.repeats = 1;
  auto rows = run_reward_recovery(env, c);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(std::isnan(rows[0].heldout_loglik));
}

TEST(IleTest, IdenticalRewardsScoreZero) {
  Environment env = make_nchain(10, 0.2);
  RewardTables r = evaluate_rewards(env.features, env.reward);
  EXPECT_NEAR(ile(env.mdp, r, r), 0.0, 1e-9);
}

TEST(BenchmarkTest, OneRowPerRepeatAndAlgorithm) {
  RunConfig c;
  c.bench.lengths = {3, 6};
  c.bench.num_states = {5};
  c.bench.num_actions = 2;
  c.bench.branching = 2;
  c.bench.repeats = 3;
  c.bench.iterations = 2;
  c.bench.num_demos = 3;
  auto rows = run_benchmark(c);
  ASSERT_EQ(rows.size(), 12u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.size, 50);
    EXPECT_GT(r.seconds, 0.0);
    EXPECT_GE(r.ci90_seconds, 0.0);
  }
  EXPECT_EQ(rows[0].algorithm, "exact-padded");
  EXPECT_EQ(rows[0].length, 3);
  EXPECT_EQ(rows[0].mean_seconds, rows[2].mean_seconds);
  const std::string csv = bench_csv(rows);
  EXPECT_THAT(csv, StartsWith("size,num_states,num_actions,L,algorithm,repeat,"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
}

TEST(BenchmarkTest, UseEnvNeedsAnEnvironment) {
  RunConfig c;
  c.bench.use_env = true;
  EXPECT_THROW(run_benchmark(c), std::invalid_argument);
}

TEST(LogLogSlopeTest, RecoversPowerLaw) {
  std::vector<double> x = {10, 20, 40, 80};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v * v);
  EXPECT_NEAR(log_log_slope(x, y), 2.0, 1e-12);
  EXPECT_THROW(log_log_slope({1.0}, {1.0}), std::invalid_argument);
}

}  // namespace
}  // namespace maxent
