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

#include "maxent/reward.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "maxent/logspace.hpp"

namespace maxent {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double w, std::span<const double> x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += w * x[i];
}

}  // namespace

std::vector<double> ParamBlocks::flatten() const {
  std::vector<double> flat;
  flat.reserve(size());
  flat.insert(flat.end(), s.begin(), s.end());
  flat.insert(flat.end(), sa.begin(), sa.end());
  flat.insert(flat.end(), sas.begin(), sas.end());
  return flat;
}

void ParamBlocks::assign_flat(std::span<const double> flat) {
  if (flat.size() != size()) {
    throw std::invalid_argument("ParamBlocks: flat vector has wrong size");
  }
  auto it = flat.begin();
  std::copy_n(it, s.size(), s.begin());
  it += static_cast<std::ptrdiff_t>(s.size());
  std::copy_n(it, sa.size(), sa.begin());
  it += static_cast<std::ptrdiff_t>(sa.size());
  std::copy_n(it, sas.size(), sas.begin());
}

double ParamBlocks::dot(const ParamBlocks& other) const {
  if (s.size() != other.s.size() || sa.size() != other.sa.size() ||
      sas.size() != other.sas.size()) {
    throw std::invalid_argument("ParamBlocks: dimension mismatch");
  }
  return maxent::dot(s, other.s) + maxent::dot(sa, other.sa) +
         maxent::dot(sas, other.sas);
}

double ParamBlocks::max_abs() const {
  double m = 0.0;
  for (const auto* block : {&s, &sa, &sas}) {
    for (double v : *block) m = std::max(m, std::abs(v));
  }
  return m;
}

ParamBlocks ParamBlocks::operator-(const ParamBlocks& other) const {
  if (s.size() != other.s.size() || sa.size() != other.sa.size() ||
      sas.size() != other.sas.size()) {
    throw std::invalid_argument("ParamBlocks: dimension mismatch");
  }
  ParamBlocks out = *this;
  for (std::size_t i = 0; i < s.size(); ++i) out.s[i] -= other.s[i];
  for (std::size_t i = 0; i < sa.size(); ++i) out.sa[i] -= other.sa[i];
  for (std::size_t i = 0; i < sas.size(); ++i) out.sas[i] -= other.sas[i];
  return out;
}

FeatureSet::FeatureSet(int num_states, int num_actions, int dim_s, int dim_sa,
                       int dim_sas)
    : num_states_(num_states),
      num_actions_(num_actions),
      dim_s_(dim_s),
      dim_sa_(dim_sa),
      dim_sas_(dim_sas) {
  if (num_states <= 0 || num_actions <= 0 || dim_s < 0 || dim_sa < 0 ||
      dim_sas < 0) {
    throw std::invalid_argument("FeatureSet: invalid dimensions");
  }
  const auto ns = static_cast<std::size_t>(num_states);
  const auto na = static_cast<std::size_t>(num_actions);
  phi_s_.assign(ns * dim_s, 0.0);
  phi_sa_.assign(ns * na * dim_sa, 0.0);
  phi_sas_.assign(ns * na * ns * dim_sas, 0.0);
}

FeatureSet FeatureSet::state_indicators(int num_states, int num_actions) {
  FeatureSet feats(num_states, num_actions, num_states, 0, 0);
  for (StateIndex s = 0; s < num_states; ++s) feats.state(s)[s] = 1.0;
  return feats;
}

FeatureSet FeatureSet::state_action_indicators(int num_states,
                                               int num_actions) {
  FeatureSet feats(num_states, num_actions, 0, num_states * num_actions, 0);
  for (StateIndex s = 0; s < num_states; ++s) {
    for (ActionIndex a = 0; a < num_actions; ++a) {
      feats.state_action(s, a)[s * num_actions + a] = 1.0;
    }
  }
  return feats;
}

RewardParams FeatureSet::zero_params() const {
  RewardParams p;
  p.s.assign(dim_s_, 0.0);
  p.sa.assign(dim_sa_, 0.0);
  p.sas.assign(dim_sas_, 0.0);
  return p;
}

void FeatureSet::check_params(const ParamBlocks& params) const {
  if (params.s.size() != static_cast<std::size_t>(dim_s_) ||
      params.sa.size() != static_cast<std::size_t>(dim_sa_) ||
      params.sas.size() != static_cast<std::size_t>(dim_sas_)) {
    throw std::invalid_argument(
        "parameter dimensions do not match the feature set");
  }
}

RewardTables evaluate_rewards(const FeatureSet& feats,
                              const RewardParams& params) {
  feats.check_params(params);
  for (const auto* block : {&params.s, &params.sa, &params.sas}) {
    for (double v : *block) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("reward parameters must be finite");
      }
    }
  }
  const int n = feats.num_states();
  const int m = feats.num_actions();
  RewardTables r;
  r.num_states = n;
  r.num_actions = m;
  r.state.assign(n, 0.0);
  r.state_action.assign(static_cast<std::size_t>(n) * m, 0.0);
  r.transition.assign(static_cast<std::size_t>(n) * m * n, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    if (feats.dim_s() > 0) r.state[s] = dot(params.s, feats.state(s));
    for (ActionIndex a = 0; a < m; ++a) {
      const std::size_t sa = static_cast<std::size_t>(s) * m + a;
      if (feats.dim_sa() > 0) {
        r.state_action[sa] = dot(params.sa, feats.state_action(s, a));
      }
      if (feats.dim_sas() > 0) {
        for (StateIndex next = 0; next < n; ++next) {
          r.transition[sa * n + next] =
              dot(params.sas, feats.transition(s, a, next));
        }
      }
    }
  }
  return r;
}

RewardTables build_padded_reward(const RewardTables& base,
                                 const PaddedMdp& padded) {
  const int n = padded.base_states;
  const int m = padded.base_actions;
  if (base.num_states != n || base.num_actions != m) {
    throw std::invalid_argument(
        "build_padded_reward: reward tables do not match the MDP");
  }
  const int np = n + 1;
  const int mp = m + 1;
  const StateIndex aux_s = padded.aux_state;
  const ActionIndex aux_a = padded.aux_action;

  RewardTables r;
  r.num_states = np;
  r.num_actions = mp;
  r.state.assign(np, 0.0);
  r.state_action.assign(static_cast<std::size_t>(np) * mp, kLogZero);
  r.transition.assign(static_cast<std::size_t>(np) * mp * np, kLogZero);

  for (StateIndex s = 0; s < np; ++s) {
    const bool original = s != aux_s && !padded.was_terminal(s);
    if (s != aux_s) r.state[s] = base.s(s);
    for (ActionIndex a = 0; a < mp; ++a) {
      const std::size_t sa = static_cast<std::size_t>(s) * mp + a;
      if (a == aux_a) {
        r.state_action[sa] = 0.0;
        r.transition[sa * np + aux_s] = 0.0;
        continue;
      }
      if (!original) continue;
      r.state_action[sa] = base.sa(s, a);
      for (StateIndex next = 0; next < n; ++next) {
        r.transition[sa * np + next] = base.sas(s, a, next);
      }
    }
  }
  return r;
}

RewardTables build_padded_reward(const FeatureSet& feats,
                                 const RewardParams& params,
                                 const PaddedMdp& padded) {
  return build_padded_reward(evaluate_rewards(feats, params), padded);
}

ParamBlocks traj_features(const Trajectory& traj, const FeatureSet& feats,
                          double discount) {
  ParamBlocks out = feats.zero_params();
  double weight = 1.0;
  const std::size_t m = traj.length();
  for (std::size_t t = 0; t < m; ++t) {
    const Step& step = traj.steps[t];
    axpy(weight, feats.state(step.state), out.s);
    if (t + 1 < m) {
      axpy(weight, feats.state_action(step.state, step.action), out.sa);
      axpy(weight,
           feats.transition(step.state, step.action, traj.steps[t + 1].state),
           out.sas);
    }
    weight *= discount;
  }
  return out;
}

double traj_reward(const Trajectory& traj, const RewardParams& params,
                   const FeatureSet& feats, double discount) {
  return params.dot(traj_features(traj, feats, discount));
}

double traj_reward(const Trajectory& traj, const RewardTables& rewards,
                   double discount) {
  double total = 0.0;
  double weight = 1.0;
  const std::size_t m = traj.length();
  for (std::size_t t = 0; t < m; ++t) {
    const Step& step = traj.steps[t];
    total += scale_log_reward(weight, rewards.s(step.state));
    if (t + 1 < m) {
      total += scale_log_reward(weight, rewards.sa(step.state, step.action));
      total += scale_log_reward(
          weight,
          rewards.sas(step.state, step.action, traj.steps[t + 1].state));
    }
    weight *= discount;
  }
  return total;
}

ParamBlocks empirical_expectations(const Dataset& data,
                                   const FeatureSet& feats, double discount) {
  if (data.size() == 0) {
    throw std::invalid_argument("empirical_expectations: empty dataset");
  }
  ParamBlocks sum = feats.zero_params();
  for (const auto& traj : data) {
    ParamBlocks f = traj_features(traj, feats, discount);
    axpy(1.0, f.s, sum.s);
    axpy(1.0, f.sa, sum.sa);
    axpy(1.0, f.sas, sum.sas);
  }
  const double inv = 1.0 / static_cast<double>(data.size());
  for (auto* block : {&sum.s, &sum.sa, &sum.sas}) {
    for (double& v : *block) v *= inv;
  }
  return sum;
}

}  // namespace maxent
