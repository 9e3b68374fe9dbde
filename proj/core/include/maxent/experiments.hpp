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

// Experiment drivers behind the command-line tool: run configuration,
// reward-recovery sweeps and runtime benchmarks. Every random draw descends
// from RunConfig::seed through named substreams.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maxent/environments.hpp"
#include "maxent/learning.hpp"
#include "maxent/optimize.hpp"

namespace maxent {

enum class Algorithm {
  kExactPadded,
  kExactPoly,
  kZiebart2008,
  kZiebart2010,
  kImportanceSampling,
};

std::string_view algorithm_name(Algorithm algorithm);
/// Accepts exact-padded, exact-poly, ziebart2008, ziebart2010,
/// importance-sampling. Throws std::invalid_argument otherwise.
Algorithm parse_algorithm(std::string_view name);

struct EnvSpec {
  std::string kind = "gridworld";  // linear-chain | gridworld | nchain | random
  int size = 4;                    // chain length or random-MDP state count
  std::vector<std::string> layout;  // gridworld; default frozen_lake_4x4()
  int rows = 0;                     // > 0 draws a random gridworld layout
  int cols = 0;
  double hole_prob = 0.2;
  double slip = 2.0 / 3.0;
  std::optional<double> discount;
  int num_actions = 2;  // random MDPs
  int branching = 2;
  int num_terminal = 0;
  /// Unset derives the environment seed from the run's root seed.
  std::optional<std::uint64_t> seed;
};

Environment make_environment(const EnvSpec& spec, std::uint64_t root_seed = 0);

struct ImportanceConfig {
  std::size_t samples = 10000;
  double stop_prob = 0.1;
};

struct BenchConfig {
  std::vector<int> lengths = {10, 20, 40, 80};
  std::vector<int> num_states = {16};
  int num_actions = 4;
  int branching = 3;
  int repeats = 3;
  /// Gradient-ascent iterations per timed learning run.
  int iterations = 5;
  int num_demos = 10;
  /// Use `env` instead of random MDPs of the sizes above.
  bool use_env = false;
};

/// Everything the three subcommands read. File paths are resolved relative
/// to the config file's directory by parse_run_config.
struct RunConfig {
  std::optional<EnvSpec> env;
  std::string mdp_path;
  std::string features_path;
  std::string trajectories_path;
  std::string ground_truth_path;  // parameters file
  std::string learned_path;       // learn result or parameters file

  Algorithm algorithm = Algorithm::kExactPadded;
  std::vector<Algorithm> algorithms = {Algorithm::kExactPadded};
  OptimizerConfig optimizer;
  ImportanceConfig importance;

  int num_demos = 50;  // learn on a built-in environment
  std::vector<int> n_paths = {1, 10, 100};
  int repeats = 20;
  int max_len = 50;
  bool success_filter = false;
  int heldout_paths = 100;
  /// Worker threads for independent repeats.
  int threads = 1;

  BenchConfig bench;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument on malformed or inconsistent settings.
RunConfig parse_run_config(std::string_view text, const std::string& base_dir = "");

/// Demonstrations from the ground-truth optimal policy. With
/// `success_only`, keeps only rollouts that end in a terminal state of
/// positive ground-truth reward, drawing until `count` are found.
Dataset sample_demonstrations(const Environment& env, std::size_t count,
                              int max_len, bool success_only,
                              std::uint64_t seed);

/// Learns with any algorithm. Baselines require state-only features.
LearnResult learn(Algorithm algorithm, const Mdp& mdp, const FeatureSet& feats,
                  const Dataset& data, const OptimizerConfig& optimizer,
                  const ImportanceConfig& importance, std::uint64_t seed);

/// Mean log-likelihood of `data` under `params` with horizon `length`.
double evaluate_log_likelihood(const Mdp& mdp, const FeatureSet& feats,
                               const RewardParams& params, const Dataset& data,
                               int length);

struct RecoveryRow {
  std::string algorithm;
  int repeat = 0;
  int n_paths = 0;
  double ile = 0.0;
  double loglik = 0.0;          // training demonstrations
  double heldout_loglik = 0.0;  // fresh demonstrations
  bool converged = false;
};

/// For every repeat, n_paths and algorithm: sample demos, learn, and score.
/// Rows come back sorted by (algorithm, n_paths, repeat).
std::vector<RecoveryRow> run_reward_recovery(const Environment& env,
                                             const RunConfig& config);

std::string recovery_csv(const std::vector<RecoveryRow>& rows);

struct BenchRow {
  long long size = 0;  // |S|^2 |A|
  int num_states = 0;
  int num_actions = 0;
  int length = 0;
  std::string algorithm;
  int repeat = 0;
  double seconds = 0.0;
  double mean_seconds = 0.0;  // over the repeats of this group
  double ci90_seconds = 0.0;  // half-width, normal approximation
};

/// Times exact-padded and exact-poly learning runs.
std::vector<BenchRow> run_benchmark(const RunConfig& config);

std::string bench_csv(const std::vector<BenchRow>& rows);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace maxent
