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

// irl learn|eval|bench --config <file> [--seed N] [--out <path>]
//
// Exit codes: 0 success, 1 validation or I/O error, 2 learning stopped
// without converging.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "maxent/experiments.hpp"
#include "maxent/io.hpp"
#include "maxent/policy.hpp"
#include "maxent/random.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string algorithm;
  std::optional<int> threads;
};

maxent::RunConfig load_config(const Options& opts) {
  const std::string text = maxent::read_text(opts.config_path);
  const std::string base =
      std::filesystem::path(opts.config_path).parent_path().string();
  maxent::RunConfig config = maxent::parse_run_config(text, base);
  if (opts.seed) config.seed = *opts.seed;
  if (!opts.algorithm.empty()) {
    config.algorithm = maxent::parse_algorithm(opts.algorithm);
    config.algorithms = {config.algorithm};
  }
  if (opts.threads) config.threads = *opts.threads;
  return config;
}

void emit(const Options& opts, const std::string& text) {
  if (opts.out_path.empty() || opts.out_path == "-") {
    std::cout << text;
  } else {
    maxent::write_text(opts.out_path, text);
  }
}

// A problem loaded from files, or built from a built-in environment.
struct Problem {
  maxent::Environment env;
  std::optional<maxent::Dataset> data;
};

Problem load_problem(const maxent::RunConfig& config, bool need_data) {
  if (!config.mdp_path.empty()) {
    maxent::Mdp mdp = maxent::read_mdp(config.mdp_path);
    if (config.features_path.empty()) {
      throw std::invalid_argument("config: 'features' is required with 'mdp'");
    }
    maxent::FeatureSet feats = maxent::read_features(
        config.features_path, mdp.num_states(), mdp.num_actions());
    maxent::RewardParams gt = config.ground_truth_path.empty()
                                  ? feats.zero_params()
                                  : maxent::read_params(config.ground_truth_path);
    feats.check_params(gt);
    Problem p{{"file", std::move(mdp), std::move(feats), std::move(gt)}, std::nullopt};
    if (!config.trajectories_path.empty()) {
      p.data = maxent::read_trajectories(config.trajectories_path);
    } else if (need_data) {
      throw std::invalid_argument("config: 'trajectories' is required with 'mdp'");
    }
    return p;
  }
  if (!config.env) {
    throw std::invalid_argument("config: provide either 'env' or 'mdp'");
  }
  Problem p{maxent::make_environment(*config.env, config.seed), std::nullopt};
  if (!config.trajectories_path.empty()) {
    p.data = maxent::read_trajectories(config.trajectories_path);
  } else if (need_data) {
    p.data = maxent::sample_demonstrations(
        p.env, static_cast<std::size_t>(config.num_demos), config.max_len,
        config.success_filter, maxent::substream(config.seed, "demos"));
  }
  return p;
}

int cmd_learn(const Options& opts) {
  const maxent::RunConfig config = load_config(opts);
  const Problem p = load_problem(config, true);
  for (const auto& traj : *p.data) maxent::validate_trajectory(p.env.mdp, traj);
  const maxent::LearnResult result =
      maxent::learn(config.algorithm, p.env.mdp, p.env.features, *p.data,
                    config.optimizer, config.importance,
                    maxent::substream(config.seed, "learn"));
  emit(opts, maxent::learn_result_to_json(result));
  if (!result.converged) {
    std::fprintf(stderr, "irl: learning stopped without converging (%s)\n",
                 result.stop_reason.c_str());
    return kExitNotConverged;
  }
  return kExitOk;
}

maxent::RewardParams read_learned(const std::string& path) {
  const std::string text = maxent::read_text(path);
  try {
    return maxent::parse_learn_result(text).params;
  } catch (const std::invalid_argument&) {
    return maxent::parse_params(text);
  }
}

int cmd_eval(const Options& opts) {
  const maxent::RunConfig config = load_config(opts);
  if (config.learned_path.empty()) {
    // Reward-recovery sweep on a built-in environment.
    if (!config.env) {
      throw std::invalid_argument(
          "config: eval needs 'learned' parameters or an 'env' to sweep");
    }
    const maxent::Environment env = maxent::make_environment(*config.env, config.seed);
    const auto rows = maxent::run_reward_recovery(env, config);
    emit(opts, maxent::recovery_csv(rows));
    return kExitOk;
  }
  const Problem p = load_problem(config, false);
  const maxent::RewardParams learned = read_learned(config.learned_path);
  p.env.features.check_params(learned);
  const auto gt_tables = maxent::evaluate_rewards(p.env.features, p.env.reward);
  maxent::RecoveryRow row;
  row.algorithm = "given";
  row.ile = maxent::ile(p.env.mdp, gt_tables,
                        maxent::evaluate_rewards(p.env.features, learned));
  row.loglik = std::nan("");
  row.heldout_loglik = std::nan("");
  if (p.data) {
    row.n_paths = static_cast<int>(p.data->size());
    row.loglik = maxent::evaluate_log_likelihood(
        p.env.mdp, p.env.features, learned, *p.data,
        static_cast<int>(p.data->max_length()));
  }
  row.converged = true;
  emit(opts, maxent::recovery_csv({row}));
  return kExitOk;
}

int cmd_bench(const Options& opts) {
  const maxent::RunConfig config = load_config(opts);
  const auto rows = maxent::run_benchmark(config);
  emit(opts, maxent::bench_csv(rows));

  // Log-log slope of mean time against L, per algorithm and size.
  std::map<std::pair<long long, std::string>, std::map<int, double>> means;
  for (const auto& r : rows) means[{r.size, r.algorithm}][r.length] = r.mean_seconds;
  for (const auto& [key, by_length] : means) {
    if (by_length.size() < 2) continue;
    std::vector<double> xs, ys;
    for (const auto& [l, t] : by_length) {
      xs.push_back(l);
      ys.push_back(t);
    }
    std::fprintf(stderr, "irl: size %lld %s: log-log slope vs L = %.3f\n",
                 key.first, key.second.c_str(), maxent::log_log_slope(xs, ys));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-entropy inverse reinforcement learning"};
  app.require_subcommand(1);
  Options opts;
  std::uint64_t seed = 0;
  int threads = 1;
  const auto add_common = [&](CLI::App* sub, bool with_algorithm) {
    sub->add_option("--config", opts.config_path, "run configuration (JSON)")
        ->required();
    sub->add_option("--seed", seed, "root seed (overrides the config)");
    sub->add_option("--out", opts.out_path, "output path (default stdout)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    if (with_algorithm) {
      sub->add_option("--algorithm", opts.algorithm,
                      "exact-padded | exact-poly | ziebart2008 | ziebart2010 | "
                      "importance-sampling");
    }
  };
  CLI::App* learn = app.add_subcommand("learn", "learn reward parameters");
  CLI::App* eval = app.add_subcommand("eval", "evaluate learned rewards (CSV)");
  CLI::App* bench = app.add_subcommand("bench", "runtime scaling benchmark (CSV)");
  add_common(learn, true);
  add_common(eval, true);
  add_common(bench, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  for (CLI::App* sub : {learn, eval, bench}) {
    if (sub->count("--seed") > 0) opts.seed = seed;
    if (sub->count("--threads") > 0) opts.threads = threads;
  }

  try {
    if (learn->parsed()) return cmd_learn(opts);
    if (eval->parsed()) return cmd_eval(opts);
    return cmd_bench(opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "irl: error: %s\n", e.what());
    return kExitError;
  }
}
