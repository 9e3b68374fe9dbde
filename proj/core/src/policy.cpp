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

#include "maxent/policy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maxent/logspace.hpp"
#include "maxent/random.hpp"

namespace maxent {
namespace {

bool has_action(const Mdp& mdp, StateIndex s) {
  for (ActionIndex a = 0; a < mdp.num_actions(); ++a) {
    if (mdp.can_act(s, a)) return true;
  }
  return false;
}

void require_tables(const Mdp& mdp, const RewardTables& r) {
  if (r.num_states != mdp.num_states() || r.num_actions != mdp.num_actions()) {
    throw std::invalid_argument("reward tables do not match the MDP");
  }
}

bool nearly_equal(double a, double b) {
  if (a == b) return true;
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= 1e-12 * scale;
}

std::vector<double> log_weights(std::span<const double> w, int n,
                                const char* what) {
  if (static_cast<int>(w.size()) != n) {
    throw std::invalid_argument(std::string(what) + " has the wrong length");
  }
  std::vector<double> out(n);
  for (int s = 0; s < n; ++s) {
    if (w[s] < 0.0) throw std::invalid_argument(std::string(what) + " is negative");
    out[s] = safe_log(w[s]);
  }
  return out;
}

// log sum over paths of 1..max_len states from `start` of q' exp(R), per end
// state, with rewards discounted as if the path began at step offset + 1.
std::vector<double> endpoint_weights(const Mdp& mdp, const Adjacency& adj,
                                     const RewardTables& r, StateIndex start,
                                     int offset, int max_len) {
  const int n = mdp.num_states();
  const double gamma = mdp.discount();
  std::vector<double> alpha(n, kLogZero), total(n, kLogZero);
  double g = std::pow(gamma, offset);
  alpha[start] = g * r.s(start);
  total[start] = alpha[start];
  for (int l = 1; l < max_len; ++l) {
    const double g_next = g * gamma;
    std::vector<double> next(n, kLogZero);
    for (StateIndex s2 = 0; s2 < n; ++s2) {
      LogSumExp acc;
      for (const ParentEdge& e : adj.parents[s2]) {
        if (is_log_zero(alpha[e.state])) continue;
        acc.add(alpha[e.state] + e.log_prob +
                g * (r.sa(e.state, e.action) + r.sas(e.state, e.action, s2)) +
                g_next * r.s(s2));
      }
      next[s2] = acc.value();
      total[s2] = log_add(total[s2], next[s2]);
    }
    alpha = std::move(next);
    g = g_next;
  }
  return total;
}

}  // namespace

ActionIndex Policy::action(StateIndex s) const {
  ActionIndex best = kNoAction;
  double best_p = 0.0;
  for (ActionIndex a = 0; a < num_actions; ++a) {
    if (prob(s, a) > best_p) {
      best_p = prob(s, a);
      best = a;
    }
  }
  return best;
}

Policy Policy::uniform(const Mdp& mdp) {
  Policy p;
  p.num_states = mdp.num_states();
  p.num_actions = mdp.num_actions();
  p.action_probs.assign(static_cast<std::size_t>(p.num_states) * p.num_actions, 0.0);
  for (StateIndex s = 0; s < p.num_states; ++s) {
    int valid = 0;
    for (ActionIndex a = 0; a < p.num_actions; ++a) valid += mdp.can_act(s, a);
    for (ActionIndex a = 0; a < p.num_actions; ++a) {
      if (mdp.can_act(s, a)) {
        p.action_probs[static_cast<std::size_t>(s) * p.num_actions + a] = 1.0 / valid;
      }
    }
  }
  return p;
}

double q_value(const Mdp& mdp, const RewardTables& r,
               std::span<const double> values, StateIndex s, ActionIndex a) {
  const auto row = mdp.transition_row(s, a);
  double q = r.s(s) + r.sa(s, a);
  for (StateIndex next = 0; next < mdp.num_states(); ++next) {
    if (row[next] <= kSupportThreshold) continue;
    q += row[next] * (r.sas(s, a, next) + mdp.discount() * values[next]);
  }
  return q;
}

ValueIterationResult value_iteration(const Mdp& mdp, const RewardTables& r,
                                     const ValueIterationOptions& options) {
  require_tables(mdp, r);
  const int n = mdp.num_states();
  const int na = mdp.num_actions();
  std::vector<bool> acting(n);
  for (StateIndex s = 0; s < n; ++s) acting[s] = has_action(mdp, s);

  ValueIterationResult out;
  std::vector<double> v(r.state.begin(), r.state.end());
  std::vector<double> next(n);
  bool done = false;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    double delta = 0.0;
    for (StateIndex s = 0; s < n; ++s) {
      if (!acting[s]) {
        next[s] = r.s(s);
        continue;
      }
      double best = -std::numeric_limits<double>::infinity();
      for (ActionIndex a = 0; a < na; ++a) {
        if (mdp.can_act(s, a)) best = std::max(best, q_value(mdp, r, v, s, a));
      }
      next[s] = best;
      delta = std::max(delta, std::abs(best - v[s]));
      if (!std::isfinite(best) || std::abs(best) > options.divergence_bound) {
        throw std::runtime_error("value iteration diverged");
      }
    }
    v.swap(next);
    out.sweeps = sweep;
    if (delta < options.tolerance) {
      done = true;
      break;
    }
  }
  if (!done) throw std::runtime_error("value iteration did not converge");

  Policy& pi = out.policy;
  pi.num_states = n;
  pi.num_actions = na;
  pi.deterministic = true;
  pi.action_probs.assign(static_cast<std::size_t>(n) * na, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    if (!acting[s]) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (ActionIndex a = 0; a < na; ++a) {
      if (mdp.can_act(s, a)) best = std::max(best, q_value(mdp, r, v, s, a));
    }
    for (ActionIndex a = 0; a < na; ++a) {
      if (mdp.can_act(s, a) &&
          q_value(mdp, r, v, s, a) >= best - options.tie_tolerance) {
        pi.action_probs[static_cast<std::size_t>(s) * na + a] = 1.0;
        break;
      }
    }
  }
  out.value.v = std::move(v);
  return out;
}

ValueFunction policy_value(const Mdp& mdp, const RewardTables& r,
                           const Policy& policy) {
  require_tables(mdp, r);
  const int n = mdp.num_states();
  const int na = mdp.num_actions();
  if (policy.num_states != n || policy.num_actions != na) {
    throw std::invalid_argument("policy does not match the MDP");
  }
  Eigen::MatrixXd a_mat = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b(n);
  for (StateIndex s = 0; s < n; ++s) {
    b[s] = r.s(s);
    if (!has_action(mdp, s)) continue;
    double mass = 0.0;
    for (ActionIndex a = 0; a < na; ++a) {
      const double p = policy.prob(s, a);
      if (p == 0.0) continue;
      if (!mdp.can_act(s, a)) {
        throw std::invalid_argument("policy uses an unavailable action");
      }
      mass += p;
      b[s] += p * r.sa(s, a);
      const auto row = mdp.transition_row(s, a);
      for (StateIndex next = 0; next < n; ++next) {
        if (row[next] <= kSupportThreshold) continue;
        b[s] += p * row[next] * r.sas(s, a, next);
        a_mat(s, next) -= mdp.discount() * p * row[next];
      }
    }
    if (std::abs(mass - 1.0) > 1e-9) {
      throw std::invalid_argument("policy row does not sum to 1");
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a_mat);
  if (!lu.isInvertible()) {
    throw std::runtime_error("policy evaluation system is singular");
  }
  Eigen::VectorXd v = lu.solve(b);
  v += lu.solve(b - a_mat * v);  // one refinement step
  const double residual = (a_mat * v - b).lpNorm<Eigen::Infinity>();
  if (!v.allFinite() ||
      residual > 1e-10 * std::max(1.0, b.lpNorm<Eigen::Infinity>())) {
    throw std::runtime_error("policy evaluation did not reach tolerance");
  }
  return {std::vector<double>(v.data(), v.data() + n)};
}

double ile(const Mdp& mdp, const RewardTables& ground_truth,
           const RewardTables& learned) {
  const Policy gt_policy = value_iteration(mdp, ground_truth).policy;
  const Policy learned_policy = value_iteration(mdp, learned).policy;
  const auto v_gt = policy_value(mdp, ground_truth, gt_policy).v;
  const auto v_l = policy_value(mdp, ground_truth, learned_policy).v;
  double total = 0.0;
  for (std::size_t s = 0; s < v_gt.size(); ++s) total += std::abs(v_gt[s] - v_l[s]);
  return total;
}

Dataset sample_rollouts(const Mdp& mdp, const Policy& policy, std::size_t count,
                        int max_len, std::uint64_t seed) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  if (count == 0) throw std::invalid_argument("count must be >= 1");
  const int na = mdp.num_actions();
  std::vector<Trajectory> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(substream(seed, static_cast<std::uint64_t>(i)));
    Trajectory traj;
    StateIndex s = sample_index(rng, mdp.start_dist());
    traj.steps.push_back({s, kNoAction});
    while (static_cast<int>(traj.length()) < max_len && !mdp.is_terminal(s)) {
      const std::span<const double> row(
          policy.action_probs.data() + static_cast<std::size_t>(s) * na,
          static_cast<std::size_t>(na));
      const int a = sample_index(rng, row);
      if (a < 0 || !mdp.can_act(s, a)) break;
      const StateIndex next = sample_index(rng, mdp.transition_row(s, a));
      traj.steps.back().action = a;
      traj.steps.push_back({next, kNoAction});
      s = next;
    }
    out.push_back(std::move(traj));
  }
  return Dataset(std::move(out));
}

double viterbi_score(const Mdp& mdp, const RewardTables& r,
                     std::span<const double> start_weights,
                     std::span<const double> end_weights,
                     const Trajectory& traj) {
  validate_trajectory(mdp, traj);
  const int n = mdp.num_states();
  const auto lf = log_weights(start_weights, n, "start weights");
  const auto lg = log_weights(end_weights, n, "end weights");
  double q = 0.0;
  for (std::size_t t = 0; t + 1 < traj.length(); ++t) {
    q += safe_log(mdp.transition(traj.steps[t].state, traj.steps[t].action,
                                 traj.steps[t + 1].state));
  }
  return lf[traj.first_state()] + q + traj_reward(traj, r, mdp.discount()) +
         lg[traj.last_state()];
}

Trajectory viterbi_ml_path(const Mdp& mdp, const RewardTables& r,
                           std::span<const double> start_weights,
                           std::span<const double> end_weights, int length) {
  require_tables(mdp, r);
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  const int n = mdp.num_states();
  const auto lf = log_weights(start_weights, n, "start weights");
  const auto lg = log_weights(end_weights, n, "end weights");
  const Adjacency adj = build_adjacency(mdp);
  const double gamma = mdp.discount();

  struct Back {
    StateIndex state = -1;
    ActionIndex action = kNoAction;
  };
  const auto idx = [n](int l, StateIndex s) {
    return static_cast<std::size_t>(l - 1) * n + s;
  };
  std::vector<double> delta(static_cast<std::size_t>(length) * n, kLogZero);
  std::vector<Back> back(delta.size());

  const auto path_to = [&](int l, StateIndex s) {
    Trajectory traj;
    traj.steps.resize(l);
    for (int k = l; k >= 1; --k) {
      traj.steps[k - 1].state = s;
      if (k > 1) {
        const Back& b = back[idx(k, s)];
        traj.steps[k - 2].action = b.action;
        s = b.state;
      }
    }
    traj.steps.back().action = kNoAction;
    return traj;
  };
  // Lexicographic order on states, then actions.
  const auto less = [](const Trajectory& x, const Trajectory& y) {
    for (std::size_t i = 0; i < x.length(); ++i) {
      if (x.steps[i].state != y.steps[i].state) {
        return x.steps[i].state < y.steps[i].state;
      }
    }
    for (std::size_t i = 0; i < x.length(); ++i) {
      if (x.steps[i].action != y.steps[i].action) {
        return x.steps[i].action < y.steps[i].action;
      }
    }
    return false;
  };

  for (StateIndex s = 0; s < n; ++s) {
    if (!is_log_zero(lf[s])) delta[idx(1, s)] = lf[s] + r.s(s);
  }
  double g = 1.0;
  for (int l = 1; l < length; ++l) {
    for (StateIndex s2 = 0; s2 < n; ++s2) {
      double best = kLogZero;
      Back best_back;
      for (const ParentEdge& e : adj.parents[s2]) {
        const double prev = delta[idx(l, e.state)];
        if (is_log_zero(prev)) continue;
        const double score =
            prev + e.log_prob +
            g * (r.sa(e.state, e.action) + r.sas(e.state, e.action, s2)) +
            g * gamma * r.s(s2);
        if (best_back.state < 0 || (score > best && !nearly_equal(score, best))) {
          best = score;
          best_back = {e.state, e.action};
        } else if (nearly_equal(score, best)) {
          Trajectory cand = path_to(l, e.state);
          Trajectory incumbent = path_to(l, best_back.state);
          cand.steps.back().action = e.action;
          incumbent.steps.back().action = best_back.action;
          if (less(cand, incumbent)) best_back = {e.state, e.action};
        }
      }
      delta[idx(l + 1, s2)] = best;
      back[idx(l + 1, s2)] = best_back;
    }
    g *= gamma;
  }

  double best = kLogZero;
  int best_l = 0;
  StateIndex best_s = -1;
  for (int l = 1; l <= length; ++l) {
    for (StateIndex s = 0; s < n; ++s) {
      const double d = delta[idx(l, s)];
      if (is_log_zero(d) || is_log_zero(lg[s])) continue;
      const double score = d + lg[s];
      if (best_s < 0 || (score > best && !nearly_equal(score, best))) {
        best = score;
        best_l = l;
        best_s = s;
      } else if (nearly_equal(score, best) && l == best_l &&
                 less(path_to(l, s), path_to(best_l, best_s))) {
        best_s = s;
      }
    }
  }
  if (best_s < 0) throw std::domain_error("no feasible path satisfies the constraints");
  return path_to(best_l, best_s);
}

std::vector<double> destination_posterior(const Mdp& mdp, const RewardTables& r,
                                          const Trajectory& prefix,
                                          std::span<const double> prior,
                                          int length) {
  require_tables(mdp, r);
  validate_trajectory(mdp, prefix);
  const int n = mdp.num_states();
  const int k = static_cast<int>(prefix.length());
  if (k > length) throw std::invalid_argument("prefix is longer than L");
  for (int t = 0; t + 1 < k; ++t) {
    const Step& st = prefix.steps[t];
    if (!mdp.can_act(st.state, st.action) ||
        mdp.transition(st.state, st.action, prefix.steps[t + 1].state) <=
            kSupportThreshold) {
      throw std::invalid_argument("prefix is infeasible in the MDP");
    }
  }
  const auto log_prior = log_weights(prior, n, "prior");
  double prior_sum = 0.0;
  for (double p : prior) prior_sum += p;
  if (std::abs(prior_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("prior must sum to 1");
  }

  const Adjacency adj = build_adjacency(mdp);
  const auto numer = endpoint_weights(mdp, adj, r, prefix.last_state(), k - 1,
                                      length - k + 1);
  const auto denom = endpoint_weights(mdp, adj, r, prefix.first_state(), 0, length);
  std::vector<double> log_post(n, kLogZero);
  LogSumExp acc;
  for (StateIndex s = 0; s < n; ++s) {
    if (is_log_zero(numer[s]) || is_log_zero(log_prior[s])) continue;
    log_post[s] = numer[s] - denom[s] + log_prior[s];
    acc.add(log_post[s]);
  }
  const double log_total = acc.value();
  if (is_log_zero(log_total)) {
    throw std::domain_error("no destination is reachable under the prior");
  }
  std::vector<double> post(n, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    if (!is_log_zero(log_post[s])) post[s] = std::exp(log_post[s] - log_total);
  }
  return post;
}

}  // namespace maxent
