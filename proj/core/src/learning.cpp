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

#include "maxent/learning.hpp"

#include <cmath>
#include <stdexcept>

#include "maxent/logspace.hpp"
#include "maxent/random.hpp"

namespace maxent {
namespace {

void require_feasible(const Mdp& mdp, const Dataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!is_feasible(mdp, data[i])) {
      throw std::invalid_argument("demonstration " + std::to_string(i) +
                                  " is infeasible in the MDP");
    }
  }
}

}  // namespace

LearnResult learn_exact(const Mdp& mdp, const FeatureSet& feats,
                        const Dataset& data, InferenceMethod method,
                        const OptimizerConfig& config) {
  require_feasible(mdp, data);
  const ExactInference inference(mdp, feats, static_cast<int>(data.max_length()));
  const ParamBlocks empirical =
      empirical_expectations(data, feats, mdp.discount());
  double mean_log_q = 0.0;
  for (const auto& traj : data) mean_log_q += log_dynamics_probability(mdp, traj);
  mean_log_q /= static_cast<double>(data.size());
  const MarginalOptions needed = inference.gradient_options();

  RewardParams params = feats.zero_params();
  const Objective objective = [&](std::span<const double> x,
                                  std::span<double> grad) {
    params.assign_flat(x);
    const auto result = inference.evaluate(params, method, needed);
    const ParamBlocks g = nll_gradient(empirical, result.marginals, feats);
    const auto flat = g.flatten();
    std::copy(flat.begin(), flat.end(), grad.begin());
    return params.dot(empirical) + mean_log_q - result.log_z;
  };
  const OptimizeResult opt = maximize(objective, params.flatten(), config);
  if (!std::isfinite(opt.value)) {
    throw std::domain_error("log-likelihood is not finite");
  }

  LearnResult out;
  out.params = feats.zero_params();
  out.params.assign_flat(opt.x);
  out.gradient = feats.zero_params();
  out.gradient.assign_flat(opt.gradient);
  out.trace = opt.trace;
  out.converged = opt.converged;
  out.stop_reason = opt.stop_reason;
  out.log_z = inference.log_partition(out.params);
  return out;
}

LearnResult learn_exact_poly(const Mdp& mdp, const FeatureSet& feats,
                             const Dataset& data,
                             const OptimizerConfig& config) {
  return learn_exact(mdp, feats, data, InferenceMethod::kPolynomial, config);
}

LearnResult learn_exact_padded(const Mdp& mdp, const FeatureSet& feats,
                               const Dataset& data,
                               const OptimizerConfig& config) {
  return learn_exact(mdp, feats, data, InferenceMethod::kPadded, config);
}

ImportanceEstimate importance_gradient(const Mdp& mdp, const FeatureSet& feats,
                                       const RewardParams& params,
                                       std::span<const ImportanceSample> samples,
                                       const Dataset& data) {
  feats.check_params(params);
  if (samples.empty()) {
    throw std::invalid_argument("importance_gradient: no samples");
  }
  const double gamma = mdp.discount();
  const RewardTables rewards = evaluate_rewards(feats, params);

  std::vector<double> log_w(samples.size());
  LogSumExp acc;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Trajectory& traj = samples[i].traj;
    // Paths the MDP cannot produce carry zero weight.
    log_w[i] = is_feasible(mdp, traj)
                   ? traj_reward(traj, rewards, gamma) +
                         log_dynamics_probability(mdp, traj) - samples[i].log_prob
                   : kLogZero;
    acc.add(log_w[i]);
  }
  const double log_total = acc.value();
  if (is_log_zero(log_total) || !std::isfinite(log_total)) {
    throw std::domain_error("importance_gradient: all weights are zero");
  }

  const std::size_t dim = params.size();
  std::vector<double> mean(dim, 0.0);
  std::vector<std::vector<double>> phis(samples.size());
  std::vector<double> w(samples.size());
  double sum_w2 = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    w[i] = std::exp(log_w[i] - log_total);
    sum_w2 += w[i] * w[i];
    if (w[i] == 0.0) continue;
    phis[i] = traj_features(samples[i].traj, feats, gamma).flatten();
    for (std::size_t k = 0; k < dim; ++k) mean[k] += w[i] * phis[i][k];
  }
  // Var of a self-normalized estimator: sum_i w_i^2 (phi_i - mean)^2.
  std::vector<double> var(dim, 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (w[i] == 0.0) continue;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = phis[i][k] - mean[k];
      var[k] += w[i] * w[i] * d * d;
    }
  }

  const auto empirical = empirical_expectations(data, feats, gamma).flatten();
  std::vector<double> grad(dim), se(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    grad[k] = empirical[k] - mean[k];
    se[k] = std::sqrt(var[k]);
  }
  ImportanceEstimate out;
  out.gradient = feats.zero_params();
  out.gradient.assign_flat(grad);
  out.std_error = feats.zero_params();
  out.std_error.assign_flat(se);
  out.effective_sample_size = 1.0 / sum_w2;
  return out;
}

std::vector<ImportanceSample> sample_uniform_proposal(const Mdp& mdp,
                                                      int length,
                                                      double stop_prob,
                                                      std::size_t count,
                                                      std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  if (!(stop_prob > 0.0 && stop_prob < 1.0)) {
    throw std::invalid_argument("stop_prob must lie in (0, 1)");
  }
  const int na = mdp.num_actions();
  const double log_stop = std::log(stop_prob);
  const double log_go = std::log1p(-stop_prob);
  std::vector<ImportanceSample> out;
  out.reserve(count);
  std::vector<double> action_weights(na);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(substream(seed, static_cast<std::uint64_t>(i)));
    ImportanceSample sample;
    const int s0 = sample_index(rng, mdp.start_dist());
    StateIndex s = s0;
    double log_p = std::log(mdp.start(s));
    sample.traj.steps.push_back({s, kNoAction});
    while (true) {
      int valid = 0;
      for (ActionIndex a = 0; a < na; ++a) {
        action_weights[a] = mdp.can_act(s, a) ? 1.0 : 0.0;
        valid += mdp.can_act(s, a) ? 1 : 0;
      }
      if (static_cast<int>(sample.traj.length()) == length || valid == 0) break;
      if (uniform01(rng) < stop_prob) {
        log_p += log_stop;
        break;
      }
      log_p += log_go;
      const ActionIndex a = sample_index(rng, action_weights);
      const StateIndex next = sample_index(rng, mdp.transition_row(s, a));
      log_p += -std::log(static_cast<double>(valid)) +
               std::log(mdp.transition(s, a, next));
      sample.traj.steps.back().action = a;
      sample.traj.steps.push_back({next, kNoAction});
      s = next;
    }
    sample.log_prob = log_p;
    out.push_back(std::move(sample));
  }
  return out;
}

LearnResult learn_importance(const Mdp& mdp, const FeatureSet& feats,
                             const Dataset& data,
                             std::span<const ImportanceSample> samples,
                             const OptimizerConfig& config) {
  require_feasible(mdp, data);
  if (samples.empty()) throw std::invalid_argument("learn_importance: no samples");
  const double gamma = mdp.discount();
  const ParamBlocks empirical = empirical_expectations(data, feats, gamma);
  double mean_log_q = 0.0;
  for (const auto& traj : data) mean_log_q += log_dynamics_probability(mdp, traj);
  mean_log_q /= static_cast<double>(data.size());

  // Per-sample features and the Theta-independent part of the log weight.
  const std::size_t count = samples.size();
  std::vector<std::vector<double>> phis(count);
  std::vector<double> base(count);
  for (std::size_t i = 0; i < count; ++i) {
    phis[i] = traj_features(samples[i].traj, feats, gamma).flatten();
    base[i] = log_dynamics_probability(mdp, samples[i].traj) - samples[i].log_prob;
  }
  const double log_count = std::log(static_cast<double>(count));

  RewardParams params = feats.zero_params();
  const auto emp_flat = empirical.flatten();
  std::vector<double> log_w(count);
  const Objective objective = [&](std::span<const double> x,
                                  std::span<double> grad) {
    LogSumExp acc;
    for (std::size_t i = 0; i < count; ++i) {
      double r = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) r += x[k] * phis[i][k];
      log_w[i] = base[i] + r;
      acc.add(log_w[i]);
    }
    const double log_total = acc.value();
    if (!std::isfinite(log_total)) {
      throw std::domain_error("importance weights are all zero");
    }
    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] = emp_flat[k];
    for (std::size_t i = 0; i < count; ++i) {
      const double w = std::exp(log_w[i] - log_total);
      if (w == 0.0) continue;
      for (std::size_t k = 0; k < grad.size(); ++k) grad[k] -= w * phis[i][k];
    }
    double dot = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) dot += x[k] * emp_flat[k];
    return dot + mean_log_q - (log_total - log_count);
  };
  const OptimizeResult opt = maximize(objective, params.flatten(), config);

  LearnResult out;
  out.params = feats.zero_params();
  out.params.assign_flat(opt.x);
  out.gradient = feats.zero_params();
  out.gradient.assign_flat(opt.gradient);
  out.trace = opt.trace;
  out.converged = opt.converged;
  out.stop_reason = opt.stop_reason;
  out.log_z = out.params.dot(empirical) + mean_log_q - opt.value;
  return out;
}

}  // namespace maxent
