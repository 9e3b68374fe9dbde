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

#include "maxent/inference.hpp"

#include <cmath>
#include <stdexcept>

#include "maxent/logspace.hpp"

namespace maxent {
namespace {

std::vector<double> discount_powers(double discount, int length) {
  std::vector<double> powers(static_cast<std::size_t>(length) + 1, 1.0);
  for (int k = 1; k <= length; ++k) powers[k] = powers[k - 1] * discount;
  return powers;
}

void require_length(int length) {
  if (length < 1) throw std::invalid_argument("path length L must be >= 1");
}

void require_tables(const RewardTables& rewards, int num_states,
                    int num_actions) {
  if (rewards.num_states != num_states || rewards.num_actions != num_actions) {
    throw std::invalid_argument("reward tables do not match the MDP");
  }
}

double to_prob(double log_value, double log_z) {
  return is_log_zero(log_value) ? 0.0 : std::exp(log_value - log_z);
}

MarginalSet empty_marginals(int length, int num_states, int num_actions,
                            double discount, double log_z,
                            MarginalOptions options) {
  MarginalSet m;
  m.length = length;
  m.num_states = num_states;
  m.num_actions = num_actions;
  m.discount = discount;
  m.log_z = log_z;
  m.has_state_action = options.state_action;
  m.has_transition = options.transition;
  const auto n = static_cast<std::size_t>(num_states);
  const auto a = static_cast<std::size_t>(num_actions);
  const auto steps = static_cast<std::size_t>(length - 1);
  m.p_s.assign(static_cast<std::size_t>(length) * n, 0.0);
  if (options.state_action) m.p_sa.assign(steps * n * a, 0.0);
  if (options.transition) m.p_sas.assign(steps * n * a * n, 0.0);
  return m;
}

}  // namespace

ForwardMessages forward_messages(const Mdp& mdp, const Adjacency& adjacency,
                                 const RewardTables& rewards, int length) {
  require_length(length);
  require_tables(rewards, mdp.num_states(), mdp.num_actions());
  const int n = mdp.num_states();
  const auto gamma = discount_powers(mdp.discount(), length);

  ForwardMessages fwd;
  fwd.length = length;
  fwd.num_states = n;
  fwd.log_alpha.assign(static_cast<std::size_t>(length) * n, kLogZero);
  for (StateIndex s = 0; s < n; ++s) {
    const double lp = safe_log(mdp.start(s));
    fwd.log_alpha[s] = is_log_zero(lp) ? kLogZero : lp + rewards.s(s);
  }
  for (int l = 1; l < length; ++l) {
    const double* prev = fwd.log_alpha.data() + static_cast<std::size_t>(l - 1) * n;
    double* next = fwd.log_alpha.data() + static_cast<std::size_t>(l) * n;
    for (StateIndex sp = 0; sp < n; ++sp) {
      LogSumExp acc;
      const double state_term = scale_log_reward(gamma[l], rewards.s(sp));
      for (const ParentEdge& e : adjacency.parents[sp]) {
        const double a = prev[e.state];
        if (is_log_zero(a)) continue;
        acc.add(a + e.log_prob +
                scale_log_reward(gamma[l - 1], rewards.sa(e.state, e.action) +
                                                   rewards.sas(e.state, e.action, sp)) +
                state_term);
      }
      next[sp] = acc.value();
    }
  }
  return fwd;
}

PolyBackwardMessages backward_messages_poly(const Mdp& mdp,
                                            const Adjacency& adjacency,
                                            const RewardTables& rewards,
                                            int length) {
  require_length(length);
  require_tables(rewards, mdp.num_states(), mdp.num_actions());
  const int n = mdp.num_states();
  const auto gamma = discount_powers(mdp.discount(), length);

  PolyBackwardMessages bwd;
  bwd.length = length;
  bwd.num_states = n;
  const auto total = static_cast<std::size_t>(length) * (length + 1) / 2;
  bwd.log_beta.assign(total * n, kLogZero);

  for (int l = 1; l <= length; ++l) {
    double* base = bwd.log_beta.data() + bwd.offset(l, 1);
    for (StateIndex s = 0; s < n; ++s) {
      base[s] = scale_log_reward(gamma[l - 1], rewards.s(s));
    }
    for (int t = 1; t < l; ++t) {
      const double* prev = bwd.log_beta.data() + bwd.offset(l, t);
      double* cur = bwd.log_beta.data() + bwd.offset(l, t + 1);
      const double w = gamma[l - t - 1];
      for (StateIndex s = 0; s < n; ++s) {
        LogSumExp acc;
        for (const ChildEdge& e : adjacency.children[s]) {
          const double b = prev[e.state];
          if (is_log_zero(b)) continue;
          acc.add(e.log_prob +
                  scale_log_reward(w, rewards.s(s) + rewards.sa(s, e.action) +
                                          rewards.sas(s, e.action, e.state)) +
                  b);
        }
        cur[s] = acc.value();
      }
    }
  }
  return bwd;
}

PaddedBackwardMessages backward_messages_padded(const PaddedMdp& padded,
                                                const RewardTables& rewards,
                                                int length) {
  require_length(length);
  const Mdp& mdp = padded.mdp;
  require_tables(rewards, mdp.num_states(), mdp.num_actions());
  const int n = mdp.num_states();
  const auto gamma = discount_powers(mdp.discount(), length);

  PaddedBackwardMessages bwd;
  bwd.length = length;
  bwd.num_states = n;
  bwd.log_beta.assign(static_cast<std::size_t>(length) * n, kLogZero);
  for (StateIndex s = 0; s < n; ++s) {
    bwd.log_beta[s] = scale_log_reward(gamma[length - 1], rewards.s(s));
  }
  for (int t = 1; t < length; ++t) {
    const double* prev = bwd.log_beta.data() + static_cast<std::size_t>(t - 1) * n;
    double* cur = bwd.log_beta.data() + static_cast<std::size_t>(t) * n;
    const double w = gamma[length - t - 1];
    for (StateIndex s = 0; s < n; ++s) {
      LogSumExp acc;
      for (const ChildEdge& e : padded.adjacency.children[s]) {
        const double b = prev[e.state];
        if (is_log_zero(b)) continue;
        acc.add(e.log_prob +
                scale_log_reward(w, rewards.s(s) + rewards.sa(s, e.action) +
                                        rewards.sas(s, e.action, e.state)) +
                b);
      }
      cur[s] = acc.value();
    }
  }
  return bwd;
}

double partition(const ForwardMessages& alpha, std::optional<int> num_states) {
  const int n = num_states.value_or(alpha.num_states);
  if (n < 0 || n > alpha.num_states) {
    throw std::invalid_argument("partition: state count out of range");
  }
  LogSumExp acc;
  for (int t = 1; t <= alpha.length; ++t) {
    for (StateIndex s = 0; s < n; ++s) acc.add(alpha.at(t, s));
  }
  return acc.value();
}

MarginalSet marginals_poly(const ForwardMessages& alpha,
                           const PolyBackwardMessages& beta, const Mdp& mdp,
                           const Adjacency& adjacency,
                           const RewardTables& rewards, double log_z,
                           MarginalOptions options) {
  const int length = alpha.length;
  const int n = mdp.num_states();
  const int na = mdp.num_actions();
  if (beta.length != length || alpha.num_states != n || beta.num_states != n) {
    throw std::invalid_argument("marginals_poly: message shapes differ");
  }
  require_tables(rewards, n, na);
  const auto gamma = discount_powers(mdp.discount(), length);
  MarginalSet m = empty_marginals(length, n, na, mdp.discount(), log_z, options);

  // suffix[t][s'] = log sum_{l=t+1}^{L} beta_{l,l-t}(s'), for t = 1..L-1.
  std::vector<double> suffix(static_cast<std::size_t>(length) * n, kLogZero);
  for (int t = 1; t < length; ++t) {
    double* row = suffix.data() + static_cast<std::size_t>(t) * n;
    for (StateIndex s = 0; s < n; ++s) {
      LogSumExp acc;
      for (int l = t + 1; l <= length; ++l) acc.add(beta.at(l, l - t, s));
      row[s] = acc.value();
    }
  }

  std::vector<double> edge_terms;
  for (int t = 1; t <= length; ++t) {
    const double* tail = suffix.data() + static_cast<std::size_t>(t) * n;
    const double w = gamma[t - 1];
    for (StateIndex s = 0; s < n; ++s) {
      const double a = alpha.at(t, s);
      if (is_log_zero(a)) continue;
      const auto& children = adjacency.children[s];
      LogSumExp total;
      total.add(0.0);  // the trajectory ends at (t, s)
      edge_terms.assign(children.size(), kLogZero);
      if (t < length) {
        for (std::size_t i = 0; i < children.size(); ++i) {
          const ChildEdge& e = children[i];
          const double b = tail[e.state];
          if (is_log_zero(b)) continue;
          edge_terms[i] = e.log_prob +
                          scale_log_reward(w, rewards.sa(s, e.action) +
                                                  rewards.sas(s, e.action, e.state)) +
                          b;
          total.add(edge_terms[i]);
        }
      }
      m.p_s[static_cast<std::size_t>(t - 1) * n + s] =
          to_prob(a + total.value(), log_z);
      if (t == length) continue;

      const std::size_t sa_row = (static_cast<std::size_t>(t - 1) * n + s) * na;
      std::size_t i = 0;
      while (i < children.size()) {
        const ActionIndex act = children[i].action;
        LogSumExp per_action;
        for (; i < children.size() && children[i].action == act; ++i) {
          per_action.add(edge_terms[i]);
          if (options.transition) {
            m.p_sas[(sa_row + act) * n + children[i].state] =
                to_prob(a + edge_terms[i], log_z);
          }
        }
        if (options.state_action) {
          m.p_sa[sa_row + act] = to_prob(a + per_action.value(), log_z);
        }
      }
    }
  }
  return m;
}

MarginalSet marginals_padded(const ForwardMessages& alpha,
                             const PaddedBackwardMessages& beta,
                             const PaddedMdp& padded,
                             const RewardTables& rewards, double log_z,
                             MarginalOptions options) {
  const int length = alpha.length;
  const int n = padded.base_states;
  const int na = padded.base_actions;
  if (beta.length != length || alpha.num_states != n ||
      beta.num_states != n + 1) {
    throw std::invalid_argument("marginals_padded: message shapes differ");
  }
  require_tables(rewards, n + 1, na + 1);
  const auto gamma = discount_powers(padded.mdp.discount(), length);
  MarginalSet m =
      empty_marginals(length, n, na, padded.mdp.discount(), log_z, options);

  for (int t = 1; t <= length; ++t) {
    const double w = gamma[t - 1];
    for (StateIndex s = 0; s < n; ++s) {
      const double a = alpha.at(t, s);
      if (is_log_zero(a)) continue;
      if (t == length) {
        m.p_s[static_cast<std::size_t>(t - 1) * n + s] = to_prob(a, log_z);
        continue;
      }
      const std::size_t sa_row = (static_cast<std::size_t>(t - 1) * n + s) * na;
      const auto& children = padded.adjacency.children[s];
      LogSumExp total;
      std::size_t i = 0;
      while (i < children.size()) {
        const ActionIndex act = children[i].action;
        LogSumExp per_action;
        for (; i < children.size() && children[i].action == act; ++i) {
          const ChildEdge& e = children[i];
          const double b = beta.at(length - t, e.state);
          if (is_log_zero(b)) continue;
          const double term =
              e.log_prob +
              scale_log_reward(w, rewards.sa(s, act) + rewards.sas(s, act, e.state)) +
              b;
          total.add(term);
          if (act == padded.aux_action || e.state == padded.aux_state) continue;
          per_action.add(term);
          if (options.transition) {
            m.p_sas[(sa_row + act) * n + e.state] = to_prob(a + term, log_z);
          }
        }
        if (options.state_action && act != padded.aux_action) {
          m.p_sa[sa_row + act] = to_prob(a + per_action.value(), log_z);
        }
      }
      m.p_s[static_cast<std::size_t>(t - 1) * n + s] =
          to_prob(a + total.value(), log_z);
    }
  }
  return m;
}

ParamBlocks model_expectations(const MarginalSet& marginals,
                               const FeatureSet& feats) {
  if (feats.num_states() != marginals.num_states ||
      feats.num_actions() != marginals.num_actions) {
    throw std::invalid_argument("model_expectations: dimension mismatch");
  }
  if ((feats.dim_sa() > 0 && !marginals.has_state_action) ||
      (feats.dim_sas() > 0 && !marginals.has_transition)) {
    throw std::invalid_argument(
        "model_expectations: marginal tables missing for these features");
  }
  const int n = marginals.num_states;
  const int na = marginals.num_actions;
  ParamBlocks out = feats.zero_params();
  double w = 1.0;
  for (int t = 1; t <= marginals.length; ++t, w *= marginals.discount) {
    for (StateIndex s = 0; s < n; ++s) {
      const double ps = marginals.state(t, s);
      if (ps != 0.0 && feats.dim_s() > 0) {
        const auto phi = feats.state(s);
        for (std::size_t k = 0; k < phi.size(); ++k) out.s[k] += w * ps * phi[k];
      }
      if (t == marginals.length) continue;
      for (ActionIndex a = 0; a < na; ++a) {
        if (feats.dim_sa() > 0) {
          const double psa = marginals.state_action(t, s, a);
          if (psa != 0.0) {
            const auto phi = feats.state_action(s, a);
            for (std::size_t k = 0; k < phi.size(); ++k) {
              out.sa[k] += w * psa * phi[k];
            }
          }
        }
        if (feats.dim_sas() > 0) {
          for (StateIndex next = 0; next < n; ++next) {
            const double p = marginals.transition(t, s, a, next);
            if (p == 0.0) continue;
            const auto phi = feats.transition(s, a, next);
            for (std::size_t k = 0; k < phi.size(); ++k) {
              out.sas[k] += w * p * phi[k];
            }
          }
        }
      }
    }
  }
  return out;
}

ParamBlocks nll_gradient(const ParamBlocks& empirical,
                         const MarginalSet& marginals,
                         const FeatureSet& feats) {
  feats.check_params(empirical);
  return empirical - model_expectations(marginals, feats);
}

ParamBlocks nll_gradient(const Dataset& data, const MarginalSet& marginals,
                         const FeatureSet& feats) {
  return nll_gradient(empirical_expectations(data, feats, marginals.discount),
                      marginals, feats);
}

double log_likelihood(const Dataset& data, const Mdp& mdp,
                      const FeatureSet& feats, const RewardParams& params,
                      double log_z) {
  const ParamBlocks empirical =
      empirical_expectations(data, feats, mdp.discount());
  double mean_log_q = 0.0;
  for (const auto& traj : data) mean_log_q += log_dynamics_probability(mdp, traj);
  mean_log_q /= static_cast<double>(data.size());
  return params.dot(empirical) + mean_log_q - log_z;
}

ExactInference::ExactInference(Mdp mdp, FeatureSet feats, int length)
    : mdp_(std::move(mdp)),
      feats_(std::move(feats)),
      length_(length),
      adjacency_(build_adjacency(mdp_)),
      padded_(pad_mdp(mdp_)) {
  require_length(length);
  if (feats_.num_states() != mdp_.num_states() ||
      feats_.num_actions() != mdp_.num_actions()) {
    throw std::invalid_argument("ExactInference: features do not match MDP");
  }
}

ExactInference::Result ExactInference::evaluate(const RewardParams& params,
                                                InferenceMethod method,
                                                MarginalOptions options) const {
  const RewardTables rewards = evaluate_rewards(feats_, params);
  const ForwardMessages alpha =
      forward_messages(mdp_, adjacency_, rewards, length_);
  const double log_z = partition(alpha);
  if (!std::isfinite(log_z)) {
    throw std::domain_error("partition function is not finite");
  }
  if (method == InferenceMethod::kPolynomial) {
    const auto beta = backward_messages_poly(mdp_, adjacency_, rewards, length_);
    return {log_z, marginals_poly(alpha, beta, mdp_, adjacency_, rewards, log_z,
                                  options)};
  }
  const RewardTables padded_rewards = build_padded_reward(rewards, padded_);
  const auto beta = backward_messages_padded(padded_, padded_rewards, length_);
  return {log_z, marginals_padded(alpha, beta, padded_, padded_rewards, log_z,
                                  options)};
}

double ExactInference::log_partition(const RewardParams& params) const {
  const RewardTables rewards = evaluate_rewards(feats_, params);
  return partition(forward_messages(mdp_, adjacency_, rewards, length_));
}

}  // namespace maxent
