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

#include "maxent/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "maxent/logspace.hpp"

namespace maxent {
namespace {

void require_horizon(int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
}

// Log-space soft-value backward pass shared by both variants. Returns the
// local policy p(a|s).
std::vector<double> soft_policy(const Mdp& mdp, std::span<const double> reward,
                                int horizon, ZiebartVariant variant) {
  const int n = mdp.num_states();
  const int na = mdp.num_actions();
  if (static_cast<int>(reward.size()) != n) {
    throw std::invalid_argument("state reward has the wrong length");
  }
  std::vector<bool> can_act_any(n, false);
  for (StateIndex s = 0; s < n; ++s) {
    for (ActionIndex a = 0; a < na; ++a) {
      if (mdp.can_act(s, a)) can_act_any[s] = true;
    }
  }
  // States without actions (terminal or dead end) keep Z = 1 throughout.
  // The 2008 pass starts every other state at Z = 1 as well; the 2010 pass
  // starts them at 0 and lets mass flow back from the absorbing states.
  std::vector<double> log_zs(n, 0.0);
  if (variant == ZiebartVariant::k2010) {
    for (StateIndex s = 0; s < n; ++s) {
      if (can_act_any[s]) log_zs[s] = kLogZero;
    }
  }
  std::vector<double> log_za(static_cast<std::size_t>(n) * na, kLogZero);
  for (int iter = 0; iter < horizon; ++iter) {
    std::vector<double> next = log_zs;
    for (StateIndex s = 0; s < n; ++s) {
      if (!can_act_any[s]) continue;
      LogSumExp state_acc;
      for (ActionIndex a = 0; a < na; ++a) {
        double& za = log_za[static_cast<std::size_t>(s) * na + a];
        za = kLogZero;
        if (!mdp.can_act(s, a)) continue;
        LogSumExp acc;
        const auto row = mdp.transition_row(s, a);
        for (StateIndex k = 0; k < n; ++k) {
          if (row[k] <= kSupportThreshold || is_log_zero(log_zs[k])) continue;
          acc.add(std::log(row[k]) + reward[s] + log_zs[k]);
        }
        za = acc.value();
        state_acc.add(za);
      }
      next[s] = state_acc.value();
    }
    log_zs = std::move(next);
  }

  std::vector<double> policy(static_cast<std::size_t>(n) * na, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    if (!can_act_any[s]) continue;
    int valid = 0;
    for (ActionIndex a = 0; a < na; ++a) valid += mdp.can_act(s, a) ? 1 : 0;
    for (ActionIndex a = 0; a < na; ++a) {
      if (!mdp.can_act(s, a)) continue;
      const std::size_t i = static_cast<std::size_t>(s) * na + a;
      // Z_s = 0 leaves the ratio undefined; fall back to uniform.
      policy[i] = is_log_zero(log_zs[s]) ? 1.0 / valid
                                         : std::exp(log_za[i] - log_zs[s]);
    }
  }
  return policy;
}

ApproxMarginals make_approx(const Mdp& mdp, int horizon,
                            std::vector<double> policy) {
  ApproxMarginals out;
  out.horizon = horizon;
  out.num_states = mdp.num_states();
  out.num_actions = mdp.num_actions();
  out.visitation.assign(static_cast<std::size_t>(out.num_states) * horizon, 0.0);
  out.local_policy = std::move(policy);
  for (StateIndex s = 0; s < out.num_states; ++s) {
    out.visitation[static_cast<std::size_t>(s) * horizon] = mdp.start(s);
  }
  return out;
}

double& d_at(ApproxMarginals& m, StateIndex s, int t) {
  return m.visitation[static_cast<std::size_t>(s) * m.horizon + (t - 1)];
}

}  // namespace

EnumeratedEnsemble enumerate_ensemble(const Mdp& mdp,
                                      const RewardTables& rewards, int length,
                                      std::size_t max_paths) {
  require_horizon(length);
  const Adjacency adj = build_adjacency(mdp);
  EnumeratedEnsemble out;
  out.length = length;
  out.num_states = mdp.num_states();
  out.num_actions = mdp.num_actions();
  out.discount = mdp.discount();

  Trajectory current;
  // log_weight of the prefix excluding the final state's reward term.
  auto visit = [&](auto&& self, double log_weight, double gamma_pow) -> void {
    const StateIndex s = current.steps.back().state;
    const double here = log_weight + gamma_pow * rewards.s(s);
    if (out.paths.size() >= max_paths) {
      throw std::length_error("enumerate_ensemble: path count guard exceeded");
    }
    out.paths.push_back({current, here});
    if (static_cast<int>(current.length()) == length) return;
    for (const ChildEdge& edge : adj.children[s]) {
      current.steps.back().action = edge.action;
      current.steps.push_back({edge.state, kNoAction});
      self(self,
           here + edge.log_prob +
               gamma_pow * (rewards.sa(s, edge.action) +
                            rewards.sas(s, edge.action, edge.state)),
           gamma_pow * mdp.discount());
      current.steps.pop_back();
      current.steps.back().action = kNoAction;
    }
  };
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    if (!(mdp.start(s) > 0.0)) continue;
    current.steps = {{s, kNoAction}};
    visit(visit, std::log(mdp.start(s)), 1.0);
  }
  LogSumExp acc;
  for (const auto& p : out.paths) acc.add(p.log_weight);
  out.log_z = acc.value();
  return out;
}

EnumeratedEnsemble enumerate_ensemble(const Mdp& mdp, const FeatureSet& feats,
                                      const RewardParams& params, int length,
                                      std::size_t max_paths) {
  return enumerate_ensemble(mdp, evaluate_rewards(feats, params), length,
                            max_paths);
}

MarginalSet oracle_marginals(const EnumeratedEnsemble& ensemble) {
  const int L = ensemble.length;
  const int n = ensemble.num_states;
  const int na = ensemble.num_actions;
  MarginalSet m;
  m.length = L;
  m.num_states = n;
  m.num_actions = na;
  m.discount = ensemble.discount;
  m.log_z = ensemble.log_z;
  m.has_state_action = true;
  m.has_transition = true;
  m.p_s.assign(static_cast<std::size_t>(L) * n, 0.0);
  const std::size_t steps = static_cast<std::size_t>(std::max(L - 1, 0));
  m.p_sa.assign(steps * n * na, 0.0);
  m.p_sas.assign(steps * n * na * n, 0.0);
  for (const auto& path : ensemble.paths) {
    const double p = std::exp(path.log_weight - ensemble.log_z);
    const auto& st = path.traj.steps;
    for (std::size_t t = 0; t < st.size(); ++t) {
      m.p_s[t * n + st[t].state] += p;
      if (t + 1 < st.size()) {
        const std::size_t sa = (t * n + st[t].state) * na + st[t].action;
        m.p_sa[sa] += p;
        m.p_sas[sa * n + st[t + 1].state] += p;
      }
    }
  }
  return m;
}

std::vector<double> ApproxMarginals::state_visitation() const {
  std::vector<double> out(num_states, 0.0);
  for (StateIndex s = 0; s < num_states; ++s) {
    for (int t = 1; t <= horizon; ++t) out[s] += d(s, t);
  }
  return out;
}

ApproxMarginals ziebart2008_marginals(const Mdp& mdp,
                                      std::span<const double> state_reward,
                                      int horizon) {
  require_horizon(horizon);
  ApproxMarginals m = make_approx(
      mdp, horizon, soft_policy(mdp, state_reward, horizon, ZiebartVariant::k2008));
  const int n = mdp.num_states();
  for (int t = 1; t < horizon; ++t) {
    for (StateIndex s = 0; s < n; ++s) {
      double total = 0.0;
      for (ActionIndex a = 0; a < m.num_actions; ++a) {
        const double pa = m.policy(s, a);
        if (pa == 0.0) continue;
        const auto row = mdp.transition_row(s, a);
        double inner = 0.0;
        for (StateIndex k = 0; k < n; ++k) inner += m.d(k, t) * row[k];
        total += pa * inner;
      }
      d_at(m, s, t + 1) = total;
    }
  }
  return m;
}

ApproxMarginals ziebart2010_marginals(const Mdp& mdp,
                                      std::span<const double> state_reward,
                                      int horizon) {
  require_horizon(horizon);
  ApproxMarginals m = make_approx(
      mdp, horizon, soft_policy(mdp, state_reward, horizon, ZiebartVariant::k2010));
  const int n = mdp.num_states();
  for (int t = 1; t < horizon; ++t) {
    for (StateIndex s = 0; s < n; ++s) {
      const double ds = m.d(s, t);
      if (ds == 0.0) continue;
      for (ActionIndex a = 0; a < m.num_actions; ++a) {
        const double pa = m.policy(s, a);
        if (pa == 0.0) continue;
        const auto row = mdp.transition_row(s, a);
        for (StateIndex next = 0; next < n; ++next) {
          d_at(m, next, t + 1) += ds * pa * row[next];
        }
      }
    }
  }
  return m;
}

ApproxMarginals ziebart_marginals(ZiebartVariant variant, const Mdp& mdp,
                                  std::span<const double> state_reward,
                                  int horizon) {
  return variant == ZiebartVariant::k2008
             ? ziebart2008_marginals(mdp, state_reward, horizon)
             : ziebart2010_marginals(mdp, state_reward, horizon);
}

ParamBlocks approx_feature_expectations(const ApproxMarginals& approx,
                                        const FeatureSet& feats) {
  if (feats.num_states() != approx.num_states) {
    throw std::invalid_argument("features do not match the marginals");
  }
  ParamBlocks out = feats.zero_params();
  const auto visits = approx.state_visitation();
  for (StateIndex s = 0; s < approx.num_states; ++s) {
    const auto phi = feats.state(s);
    for (std::size_t k = 0; k < phi.size(); ++k) out.s[k] += visits[s] * phi[k];
  }
  return out;
}

LearnResult approx_irl_learn(const Mdp& mdp, const FeatureSet& feats,
                             const Dataset& data, ZiebartVariant variant,
                             const OptimizerConfig& config) {
  if (!feats.state_only()) {
    throw std::invalid_argument(
        "approximate baselines support state-only features");
  }
  if (feats.num_states() != mdp.num_states() ||
      feats.num_actions() != mdp.num_actions()) {
    throw std::invalid_argument("features do not match the MDP");
  }
  for (const auto& traj : data) {
    if (!is_feasible(mdp, traj)) {
      throw std::invalid_argument("demonstration is infeasible in the MDP");
    }
  }
  const int horizon = static_cast<int>(data.max_length());
  const ParamBlocks empirical = empirical_expectations(data, feats, 1.0);

  RewardParams params = feats.zero_params();
  const Objective objective = [&](std::span<const double> x,
                                  std::span<double> grad) {
    params.assign_flat(x);
    const RewardTables r = evaluate_rewards(feats, params);
    const ApproxMarginals approx =
        ziebart_marginals(variant, mdp, r.state, horizon);
    const ParamBlocks model = approx_feature_expectations(approx, feats);
    for (std::size_t k = 0; k < grad.size(); ++k) {
      grad[k] = empirical.s[k] - model.s[k];
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  OptimizerConfig ga = config;
  ga.method = OptimizerMethod::kGradientAscent;
  OptimizeResult opt = maximize(objective, params.flatten(), ga);

  LearnResult out;
  out.params = feats.zero_params();
  out.params.assign_flat(opt.x);
  out.gradient = feats.zero_params();
  out.gradient.assign_flat(opt.gradient);
  out.trace = std::move(opt.trace);
  out.converged = opt.converged;
  out.stop_reason = std::move(opt.stop_reason);
  const RewardTables r = evaluate_rewards(feats, out.params);
  out.log_z = partition(forward_messages(mdp, build_adjacency(mdp), r, horizon));
  return out;
}

}  // namespace maxent
