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

#include "maxent/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "maxent/baselines.hpp"
#include "maxent/inference.hpp"
#include "maxent/policy.hpp"
#include "maxent/random.hpp"

namespace maxent {
namespace {

using json = nlohmann::json;

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Runs fn(0..count-1) on up to `threads` workers; rethrows the first error.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

bool is_success(const Environment& env, const RewardTables& gt,
                const Trajectory& traj) {
  const StateIndex last = traj.last_state();
  return env.mdp.is_terminal(last) && gt.s(last) > 0.0;
}

std::string resolve(const std::string& base, const std::string& path) {
  if (path.empty() || base.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base) / p).string();
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
    }
  }
}

OptimizerConfig parse_optimizer(const json& j) {
  check_keys(j,
             {"method", "max_iters", "grad_tol", "rel_tol", "step_size", "history",
              "wolfe_c1", "wolfe_c2", "max_line_search", "lower_bound",
              "upper_bound"},
             "optimizer");
  OptimizerConfig c;
  if (j.contains("method")) {
    const auto m = j.at("method").get<std::string>();
    if (m == "quasi-newton") {
      c.method = OptimizerMethod::kQuasiNewton;
    } else if (m == "gradient-ascent") {
      c.method = OptimizerMethod::kGradientAscent;
    } else {
      throw std::invalid_argument("config: unknown optimizer method '" + m + "'");
    }
  }
  c.max_iters = j.value("max_iters", c.max_iters);
  c.grad_tol = j.value("grad_tol", c.grad_tol);
  c.rel_tol = j.value("rel_tol", c.rel_tol);
  c.step_size = j.value("step_size", c.step_size);
  c.history = j.value("history", c.history);
  c.wolfe_c1 = j.value("wolfe_c1", c.wolfe_c1);
  c.wolfe_c2 = j.value("wolfe_c2", c.wolfe_c2);
  c.max_line_search = j.value("max_line_search", c.max_line_search);
  if (j.contains("lower_bound")) c.lower_bound = j.at("lower_bound").get<double>();
  if (j.contains("upper_bound")) c.upper_bound = j.at("upper_bound").get<double>();
  c.validate();
  return c;
}

EnvSpec parse_env(const json& j) {
  check_keys(j,
             {"kind", "size", "layout", "rows", "cols", "hole_prob", "slip",
              "discount", "num_actions", "branching", "num_terminal", "seed"},
             "env");
  EnvSpec e;
  e.kind = j.value("kind", e.kind);
  if (e.kind == "nchain") {
    e.slip = 0.2;
    e.size = 10;
  }
  e.size = j.value("size", e.size);
  if (j.contains("layout")) e.layout = j.at("layout").get<std::vector<std::string>>();
  e.rows = j.value("rows", e.rows);
  e.cols = j.value("cols", e.cols);
  e.hole_prob = j.value("hole_prob", e.hole_prob);
  e.slip = j.value("slip", e.slip);
  if (j.contains("discount")) e.discount = j.at("discount").get<double>();
  e.num_actions = j.value("num_actions", e.num_actions);
  e.branching = j.value("branching", e.branching);
  e.num_terminal = j.value("num_terminal", e.num_terminal);
  if (j.contains("seed")) e.seed = j.at("seed").get<std::uint64_t>();
  static const std::set<std::string> kinds = {"linear-chain", "gridworld",
                                              "nchain", "random"};
  if (!kinds.count(e.kind)) {
    throw std::invalid_argument("config: unknown env kind '" + e.kind + "'");
  }
  return e;
}

}  // namespace

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kExactPadded: return "exact-padded";
    case Algorithm::kExactPoly: return "exact-poly";
    case Algorithm::kZiebart2008: return "ziebart2008";
    case Algorithm::kZiebart2010: return "ziebart2010";
    case Algorithm::kImportanceSampling: return "importance-sampling";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kExactPadded, Algorithm::kExactPoly,
                      Algorithm::kZiebart2008, Algorithm::kZiebart2010,
                      Algorithm::kImportanceSampling}) {
    if (algorithm_name(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

Environment make_environment(const EnvSpec& spec, std::uint64_t root_seed) {
  const std::uint64_t seed = spec.seed.value_or(substream(root_seed, "env"));
  if (spec.kind == "linear-chain") {
    Environment env = make_linear_chain(spec.size);
    if (spec.discount) env.mdp = env.mdp.with_discount(*spec.discount);
    return env;
  }
  if (spec.kind == "gridworld") {
    std::vector<std::string> layout = spec.layout;
    if (layout.empty()) {
      layout = spec.rows > 0
                   ? random_gridworld_layout(spec.rows, spec.cols, spec.hole_prob, seed)
                   : frozen_lake_4x4();
    }
    return make_gridworld(layout, spec.slip, spec.discount.value_or(0.99));
  }
  if (spec.kind == "nchain") {
    return make_nchain(spec.size, spec.slip, spec.discount.value_or(0.95));
  }
  if (spec.kind == "random") {
    RandomMdpOptions opts;
    opts.num_terminal = spec.num_terminal;
    opts.discount = spec.discount.value_or(1.0);
    Mdp mdp = make_random_mdp(spec.size, spec.num_actions, spec.branching, seed, opts);
    FeatureSet feats = FeatureSet::state_indicators(spec.size, spec.num_actions);
    RewardParams reward = make_random_params(feats, 1.0, substream(seed, "reward"));
    return {"random-" + std::to_string(spec.size), std::move(mdp), std::move(feats),
            std::move(reward)};
  }
  throw std::invalid_argument("unknown env kind '" + spec.kind + "'");
}

RunConfig parse_run_config(std::string_view text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: expected an object");
  try {
    check_keys(j,
               {"env", "mdp", "features", "trajectories", "ground_truth", "learned",
                "algorithm", "algorithms", "optimizer", "importance", "num_demos",
                "n_paths", "repeats", "max_len", "success_filter", "heldout_paths",
                "threads", "bench", "seed"},
               "config");
    RunConfig c;
    if (j.contains("env")) c.env = parse_env(j.at("env"));
    c.mdp_path = resolve(base_dir, j.value("mdp", std::string{}));
    c.features_path = resolve(base_dir, j.value("features", std::string{}));
    c.trajectories_path = resolve(base_dir, j.value("trajectories", std::string{}));
    c.ground_truth_path = resolve(base_dir, j.value("ground_truth", std::string{}));
    c.learned_path = resolve(base_dir, j.value("learned", std::string{}));
    if (j.contains("algorithm")) {
      c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
      c.algorithms = {c.algorithm};
    }
    if (j.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : j.at("algorithms")) {
        c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
      }
      if (c.algorithms.empty()) throw std::invalid_argument("config: empty algorithms");
    }
    if (j.contains("optimizer")) c.optimizer = parse_optimizer(j.at("optimizer"));
    if (j.contains("importance")) {
      const json& imp = j.at("importance");
      check_keys(imp, {"samples", "stop_prob"}, "importance");
      c.importance.samples = imp.value("samples", c.importance.samples);
      c.importance.stop_prob = imp.value("stop_prob", c.importance.stop_prob);
    }
    c.num_demos = j.value("num_demos", c.num_demos);
    if (j.contains("n_paths")) c.n_paths = j.at("n_paths").get<std::vector<int>>();
    c.repeats = j.value("repeats", c.repeats);
    c.max_len = j.value("max_len", c.max_len);
    c.success_filter = j.value("success_filter", c.success_filter);
    c.heldout_paths = j.value("heldout_paths", c.heldout_paths);
    c.threads = j.value("threads", c.threads);
    c.seed = j.value("seed", c.seed);
    if (j.contains("bench")) {
      const json& b = j.at("bench");
      check_keys(b,
                 {"lengths", "num_states", "num_actions", "branching", "repeats",
                  "iterations", "num_demos", "use_env"},
                 "bench");
      BenchConfig& bc = c.bench;
      if (b.contains("lengths")) bc.lengths = b.at("lengths").get<std::vector<int>>();
      if (b.contains("num_states")) {
        bc.num_states = b.at("num_states").get<std::vector<int>>();
      }
      bc.num_actions = b.value("num_actions", bc.num_actions);
      bc.branching = b.value("branching", bc.branching);
      bc.repeats = b.value("repeats", bc.repeats);
      bc.iterations = b.value("iterations", bc.iterations);
      bc.num_demos = b.value("num_demos", bc.num_demos);
      bc.use_env = b.value("use_env", bc.use_env);
    }

    if (c.num_demos < 1) throw std::invalid_argument("config: num_demos must be >= 1");
    if (c.repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
    if (c.max_len < 1) throw std::invalid_argument("config: max_len must be >= 1");
    if (c.heldout_paths < 0) throw std::invalid_argument("config: heldout_paths must be >= 0");
    if (c.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    for (int n : c.n_paths) {
      if (n < 1) throw std::invalid_argument("config: n_paths entries must be >= 1");
    }
    if (c.importance.samples < 1 ||
        !(c.importance.stop_prob > 0.0 && c.importance.stop_prob < 1.0)) {
      throw std::invalid_argument("config: bad importance settings");
    }
    const BenchConfig& bc = c.bench;
    if (bc.lengths.empty() || bc.repeats < 1 || bc.iterations < 1 ||
        bc.num_demos < 1 || bc.num_actions < 1 || bc.branching < 1) {
      throw std::invalid_argument("config: bad bench settings");
    }
    for (int l : bc.lengths) {
      if (l < 1) throw std::invalid_argument("config: bench lengths must be >= 1");
    }
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

Dataset sample_demonstrations(const Environment& env, std::size_t count,
                              int max_len, bool success_only,
                              std::uint64_t seed) {
  const RewardTables gt = evaluate_rewards(env.features, env.reward);
  const Policy policy = value_iteration(env.mdp, gt).policy;
  if (!success_only) return sample_rollouts(env.mdp, policy, count, max_len, seed);
  std::vector<Trajectory> kept;
  constexpr std::uint64_t kMaxBatches = 1000;
  for (std::uint64_t batch = 0; batch < kMaxBatches && kept.size() < count; ++batch) {
    const Dataset draws =
        sample_rollouts(env.mdp, policy, count, max_len, substream(seed, batch));
    for (const auto& traj : draws) {
      if (kept.size() < count && is_success(env, gt, traj)) kept.push_back(traj);
    }
  }
  if (kept.size() < count) {
    throw std::runtime_error("could not draw enough successful demonstrations");
  }
  return Dataset(std::move(kept));
}

LearnResult learn(Algorithm algorithm, const Mdp& mdp, const FeatureSet& feats,
                  const Dataset& data, const OptimizerConfig& optimizer,
                  const ImportanceConfig& importance, std::uint64_t seed) {
  switch (algorithm) {
    case Algorithm::kExactPadded:
      return learn_exact_padded(mdp, feats, data, optimizer);
    case Algorithm::kExactPoly:
      return learn_exact_poly(mdp, feats, data, optimizer);
    case Algorithm::kZiebart2008:
      return approx_irl_learn(mdp, feats, data, ZiebartVariant::k2008, optimizer);
    case Algorithm::kZiebart2010:
      return approx_irl_learn(mdp, feats, data, ZiebartVariant::k2010, optimizer);
    case Algorithm::kImportanceSampling: {
      const auto samples = sample_uniform_proposal(
          mdp, static_cast<int>(data.max_length()), importance.stop_prob,
          importance.samples, substream(seed, "proposal"));
      return learn_importance(mdp, feats, data, samples, optimizer);
    }
  }
  throw std::invalid_argument("unknown algorithm");
}

double evaluate_log_likelihood(const Mdp& mdp, const FeatureSet& feats,
                               const RewardParams& params, const Dataset& data,
                               int length) {
  const int L = std::max(length, static_cast<int>(data.max_length()));
  const ExactInference inference(mdp, feats, L);
  return log_likelihood(data, mdp, feats, params, inference.log_partition(params));
}

std::vector<RecoveryRow> run_reward_recovery(const Environment& env,
                                             const RunConfig& config) {
  struct Task {
    int repeat;
    int n_paths;
  };
  std::vector<Task> tasks;
  for (int r = 0; r < config.repeats; ++r) {
    for (int n : config.n_paths) tasks.push_back({r, n});
  }
  const RewardTables gt = evaluate_rewards(env.features, env.reward);
  std::vector<std::vector<RecoveryRow>> results(tasks.size());
  parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
    const Task& task = tasks[i];
    const std::string tag =
        std::to_string(task.repeat) + "/" + std::to_string(task.n_paths);
    const Dataset demos = sample_demonstrations(
        env, static_cast<std::size_t>(task.n_paths), config.max_len,
        config.success_filter, substream(config.seed, "demos/" + tag));
    std::optional<Dataset> heldout;
    if (config.heldout_paths > 0) {
      heldout = sample_demonstrations(
          env, static_cast<std::size_t>(config.heldout_paths), config.max_len,
          config.success_filter,
          substream(config.seed, "heldout/" + std::to_string(task.repeat)));
    }
    for (Algorithm algorithm : config.algorithms) {
      const LearnResult result =
          learn(algorithm, env.mdp, env.features, demos, config.optimizer,
                config.importance, substream(config.seed, "learn/" + tag));
      RecoveryRow row;
      row.algorithm = std::string(algorithm_name(algorithm));
      row.repeat = task.repeat;
      row.n_paths = task.n_paths;
      row.ile = ile(env.mdp, gt, evaluate_rewards(env.features, result.params));
      row.loglik = evaluate_log_likelihood(env.mdp, env.features, result.params,
                                           demos,
                                           static_cast<int>(demos.max_length()));
      row.heldout_loglik =
          heldout ? evaluate_log_likelihood(env.mdp, env.features, result.params,
                                            *heldout, config.max_len)
                  : std::nan("");
      row.converged = result.converged;
      results[i].push_back(std::move(row));
    }
  });
  std::vector<RecoveryRow> rows;
  for (auto& block : results) {
    for (auto& row : block) rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const RecoveryRow& a, const RecoveryRow& b) {
    return std::tie(a.algorithm, a.n_paths, a.repeat) <
           std::tie(b.algorithm, b.n_paths, b.repeat);
  });
  return rows;
}

std::string recovery_csv(const std::vector<RecoveryRow>& rows) {
  std::string out = "algorithm,repeat,n_paths,ile,loglik,heldout_loglik,converged\n";
  for (const auto& r : rows) {
    out += r.algorithm + "," + std::to_string(r.repeat) + "," +
           std::to_string(r.n_paths) + "," + fmt_double(r.ile) + "," +
           fmt_double(r.loglik) + "," + fmt_double(r.heldout_loglik) + "," +
           (r.converged ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<BenchRow> run_benchmark(const RunConfig& config) {
  const BenchConfig& bc = config.bench;
  struct Problem {
    Mdp mdp;
    FeatureSet feats;
  };
  std::vector<Problem> problems;
  if (bc.use_env) {
    if (!config.env) throw std::invalid_argument("bench: use_env needs an env");
    Environment env = make_environment(*config.env, config.seed);
    problems.push_back({std::move(env.mdp), std::move(env.features)});
  } else {
    for (int n : bc.num_states) {
      RandomMdpOptions opts;
      Mdp mdp = make_random_mdp(n, bc.num_actions, std::min(bc.branching, n),
                                substream(config.seed, "bench-mdp/" + std::to_string(n)),
                                opts);
      FeatureSet feats = FeatureSet::state_indicators(n, bc.num_actions);
      problems.push_back({std::move(mdp), std::move(feats)});
    }
  }

  OptimizerConfig opt;
  opt.method = OptimizerMethod::kGradientAscent;
  opt.max_iters = bc.iterations;
  opt.grad_tol = 1e-300;
  opt.rel_tol = 0.0;
  opt.step_size = 0.1;

  std::vector<BenchRow> rows;
  for (const Problem& p : problems) {
    const int n = p.mdp.num_states();
    const int na = p.mdp.num_actions();
    const Policy uniform = Policy::uniform(p.mdp);
    for (int L : bc.lengths) {
      const Dataset demos = sample_rollouts(
          p.mdp, uniform, static_cast<std::size_t>(bc.num_demos), L,
          substream(config.seed, "bench-demos/" + std::to_string(n) + "/" +
                                     std::to_string(L)));
      for (int rep = 0; rep < bc.repeats; ++rep) {
        for (Algorithm algorithm : {Algorithm::kExactPadded, Algorithm::kExactPoly}) {
          const auto start = std::chrono::steady_clock::now();
          const LearnResult result = learn(algorithm, p.mdp, p.feats, demos, opt,
                                           config.importance, config.seed);
          const auto stop = std::chrono::steady_clock::now();
          (void)result;
          BenchRow row;
          row.size = static_cast<long long>(n) * n * na;
          row.num_states = n;
          row.num_actions = na;
          row.length = L;
          row.algorithm = std::string(algorithm_name(algorithm));
          row.repeat = rep;
          row.seconds = std::chrono::duration<double>(stop - start).count();
          rows.push_back(std::move(row));
        }
      }
    }
  }

  // Group statistics over repeats.
  std::map<std::tuple<int, int, std::string>, std::vector<double>> groups;
  for (const auto& r : rows) groups[{r.num_states, r.length, r.algorithm}].push_back(r.seconds);
  for (auto& r : rows) {
    const auto& xs = groups[{r.num_states, r.length, r.algorithm}];
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    const double sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
    r.mean_seconds = mean;
    r.ci90_seconds = 1.6448536269514722 * sd / std::sqrt(static_cast<double>(xs.size()));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.size, a.length, a.algorithm, a.repeat) <
           std::tie(b.size, b.length, b.algorithm, b.repeat);
  });
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out =
      "size,num_states,num_actions,L,algorithm,repeat,wall_time_s,mean_s,ci90_s\n";
  for (const auto& r : rows) {
    out += std::to_string(r.size) + "," + std::to_string(r.num_states) + "," +
           std::to_string(r.num_actions) + "," + std::to_string(r.length) + "," +
           r.algorithm + "," + std::to_string(r.repeat) + "," + fmt_double(r.seconds) +
           "," + fmt_double(r.mean_seconds) + "," + fmt_double(r.ci90_seconds) + "\n";
  }
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("log_log_slope: need two or more matching points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace maxent
