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

#include "maxent/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace maxent {
namespace {

using json = nlohmann::json;

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

// Runs `fn`, turning library type errors into std::invalid_argument.
template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void fill_vector(const json& arr, std::span<double> out, const char* what) {
  require(arr.is_array() && arr.size() == out.size(),
          std::string(what) + ": wrong shape");
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = arr[k].get<double>();
}

int infer_dim(const json& table, int depth) {
  const json* node = &table;
  for (int i = 0; i < depth; ++i) {
    if (!node->is_array() || node->empty()) return 0;
    node = &(*node)[0];
  }
  require(node->is_array(), "feature table: expected vectors at the leaves");
  return static_cast<int>(node->size());
}

json blocks_json(const ParamBlocks& p) {
  return json{{"theta_s", p.s}, {"theta_sa", p.sa}, {"theta_sas", p.sas}};
}

ParamBlocks blocks_from(const json& j) {
  ParamBlocks p;
  if (j.contains("theta_s")) p.s = j.at("theta_s").get<std::vector<double>>();
  if (j.contains("theta_sa")) p.sa = j.at("theta_sa").get<std::vector<double>>();
  if (j.contains("theta_sas")) p.sas = j.at("theta_sas").get<std::vector<double>>();
  return p;
}

}  // namespace

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return buf.str();
}

void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("error writing '" + path + "'");
}

Mdp parse_mdp(std::string_view text) {
  const json j = parse_json(text, "MDP");
  return guarded("MDP", [&] {
    const int n = j.at("num_states").get<int>();
    const int na = j.at("num_actions").get<int>();
    auto start = j.at("start_dist").get<std::vector<double>>();
    const double discount = j.value("discount", 1.0);
    auto terminals = j.value("terminal_states", std::vector<StateIndex>{});
    const json& tr = j.at("transitions");
    require(n > 0 && na > 0, "MDP: state and action counts must be positive");
    require(tr.is_array(), "MDP: transitions must be an array");
    // Dense rows nest arrays two levels down; sparse entries hold numbers.
    const bool sparse = tr.empty() || !tr[0].is_array() || tr[0].empty() ||
                        !tr[0][0].is_array();
    if (sparse) {
      std::vector<SparseTransition> list;
      list.reserve(tr.size());
      for (const auto& e : tr) {
        require(e.is_array() && e.size() == 4,
                "MDP: sparse transitions are [s, a, s', p]");
        list.push_back({e[0].get<StateIndex>(), e[1].get<ActionIndex>(),
                        e[2].get<StateIndex>(), e[3].get<double>()});
      }
      return Mdp::from_sparse(n, na, std::move(start), list, discount,
                              std::move(terminals));
    }
    std::vector<double> dense(static_cast<std::size_t>(n) * na * n);
    require(tr.size() == static_cast<std::size_t>(n),
            "MDP: dense transitions need num_states rows");
    for (int s = 0; s < n; ++s) {
      require(tr[s].is_array() && tr[s].size() == static_cast<std::size_t>(na),
              "MDP: dense transitions need num_actions entries per state");
      for (int a = 0; a < na; ++a) {
        fill_vector(tr[s][a],
                    std::span<double>(dense.data() +
                                          (static_cast<std::size_t>(s) * na + a) * n,
                                      static_cast<std::size_t>(n)),
                    "MDP transition row");
      }
    }
    return Mdp(n, na, std::move(start), std::move(dense), discount,
               std::move(terminals));
  });
}

std::string mdp_to_json(const Mdp& mdp, bool sparse) {
  const int n = mdp.num_states();
  const int na = mdp.num_actions();
  json j;
  j["num_states"] = n;
  j["num_actions"] = na;
  j["start_dist"] = std::vector<double>(mdp.start_dist().begin(), mdp.start_dist().end());
  j["discount"] = mdp.discount();
  j["terminal_states"] = mdp.terminal_states();
  json tr = json::array();
  for (StateIndex s = 0; s < n; ++s) {
    json per_state = json::array();
    for (ActionIndex a = 0; a < na; ++a) {
      const auto row = mdp.transition_row(s, a);
      if (sparse) {
        for (StateIndex next = 0; next < n; ++next) {
          if (row[next] != 0.0) tr.push_back({s, a, next, row[next]});
        }
      } else {
        per_state.push_back(std::vector<double>(row.begin(), row.end()));
      }
    }
    if (!sparse) tr.push_back(std::move(per_state));
  }
  j["transitions"] = std::move(tr);
  return j.dump(2) + "\n";
}

FeatureSet parse_features(std::string_view text, int num_states,
                          int num_actions) {
  const json j = parse_json(text, "features");
  return guarded("features", [&] {
    const int n = num_states;
    const int na = num_actions;
    const json empty = json::array();
    const json& phi_s = j.contains("phi_s") ? j.at("phi_s") : empty;
    const json& phi_sa = j.contains("phi_sa") ? j.at("phi_sa") : empty;
    const json phi_sas = j.contains("phi_sas") ? j.at("phi_sas") : json::array();
    const bool sas_sparse = phi_sas.is_object();
    const int ds = phi_s.empty() ? 0 : infer_dim(phi_s, 1);
    const int dsa = phi_sa.empty() ? 0 : infer_dim(phi_sa, 2);
    const int dsas = sas_sparse ? phi_sas.at("dim").get<int>()
                                : (phi_sas.empty() ? 0 : infer_dim(phi_sas, 3));
    FeatureSet feats(n, na, ds, dsa, dsas);
    if (ds > 0) {
      require(phi_s.size() == static_cast<std::size_t>(n), "phi_s: need one row per state");
      for (int s = 0; s < n; ++s) fill_vector(phi_s[s], feats.state(s), "phi_s");
    }
    if (dsa > 0) {
      require(phi_sa.size() == static_cast<std::size_t>(n), "phi_sa: need one row per state");
      for (int s = 0; s < n; ++s) {
        require(phi_sa[s].size() == static_cast<std::size_t>(na),
                "phi_sa: need one entry per action");
        for (int a = 0; a < na; ++a) {
          fill_vector(phi_sa[s][a], feats.state_action(s, a), "phi_sa");
        }
      }
    }
    if (dsas > 0 && sas_sparse) {
      for (const auto& e : phi_sas.at("entries")) {
        require(e.is_array() && e.size() == 4, "phi_sas entries are [s, a, s', [values]]");
        const int s = e[0].get<int>();
        const int a = e[1].get<int>();
        const int s2 = e[2].get<int>();
        require(s >= 0 && s < n && a >= 0 && a < na && s2 >= 0 && s2 < n,
                "phi_sas: index out of range");
        fill_vector(e[3], feats.transition(s, a, s2), "phi_sas");
      }
    } else if (dsas > 0) {
      require(phi_sas.size() == static_cast<std::size_t>(n), "phi_sas: need one row per state");
      for (int s = 0; s < n; ++s) {
        require(phi_sas[s].size() == static_cast<std::size_t>(na),
                "phi_sas: need one entry per action");
        for (int a = 0; a < na; ++a) {
          require(phi_sas[s][a].size() == static_cast<std::size_t>(n),
                  "phi_sas: need one entry per successor");
          for (int s2 = 0; s2 < n; ++s2) {
            fill_vector(phi_sas[s][a][s2], feats.transition(s, a, s2), "phi_sas");
          }
        }
      }
    }
    return feats;
  });
}

std::string features_to_json(const FeatureSet& feats) {
  const int n = feats.num_states();
  const int na = feats.num_actions();
  json j;
  json phi_s = json::array();
  for (int s = 0; s < n && feats.dim_s() > 0; ++s) {
    const auto v = feats.state(s);
    phi_s.push_back(std::vector<double>(v.begin(), v.end()));
  }
  j["phi_s"] = std::move(phi_s);
  if (feats.dim_sa() > 0) {
    json phi_sa = json::array();
    for (int s = 0; s < n; ++s) {
      json row = json::array();
      for (int a = 0; a < na; ++a) {
        const auto v = feats.state_action(s, a);
        row.push_back(std::vector<double>(v.begin(), v.end()));
      }
      phi_sa.push_back(std::move(row));
    }
    j["phi_sa"] = std::move(phi_sa);
  }
  if (feats.dim_sas() > 0) {
    json entries = json::array();
    for (int s = 0; s < n; ++s) {
      for (int a = 0; a < na; ++a) {
        for (int s2 = 0; s2 < n; ++s2) {
          const auto v = feats.transition(s, a, s2);
          bool any = false;
          for (double x : v) any = any || x != 0.0;
          if (any) entries.push_back({s, a, s2, std::vector<double>(v.begin(), v.end())});
        }
      }
    }
    j["phi_sas"] = {{"dim", feats.dim_sas()}, {"entries", std::move(entries)}};
  }
  return j.dump() + "\n";
}

RewardParams parse_params(std::string_view text) {
  const json j = parse_json(text, "parameters");
  return guarded("parameters", [&] { return blocks_from(j); });
}

std::string params_to_json(const RewardParams& params) {
  return blocks_json(params).dump(2) + "\n";
}

Dataset parse_trajectories(std::string_view text) {
  std::vector<Trajectory> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "trajectory line " + std::to_string(line_no);
    const json j = parse_json(line, where.c_str());
    Trajectory traj = guarded(where.c_str(), [&] {
      Trajectory t;
      require(j.is_array() && !j.empty(), where + ": expected a non-empty array");
      for (const auto& step : j) {
        require(step.is_array() && step.size() == 2, where + ": steps are [s, a]");
        t.steps.push_back({step[0].get<StateIndex>(), step[1].get<ActionIndex>()});
      }
      return t;
    });
    for (std::size_t i = 0; i < traj.length(); ++i) {
      const bool last = i + 1 == traj.length();
      require(last == (traj.steps[i].action == kNoAction),
              where + ": only the final step has action -1");
    }
    out.push_back(std::move(traj));
  }
  require(!out.empty(), "trajectory file contains no trajectories");
  return Dataset(std::move(out));
}

std::string trajectories_to_text(const Dataset& data) {
  std::string out;
  for (const auto& traj : data) {
    json j = json::array();
    for (const auto& step : traj.steps) j.push_back({step.state, step.action});
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string learn_result_to_json(const LearnResult& result) {
  json trace = json::array();
  for (const auto& rec : result.trace) {
    trace.push_back({{"iteration", rec.iteration},
                     {"loglik", rec.value},
                     {"grad_norm", rec.grad_norm}});
  }
  json j{{"params", blocks_json(result.params)},
         {"log_z", result.log_z},
         {"converged", result.converged},
         {"stop_reason", result.stop_reason},
         {"gradient", blocks_json(result.gradient)},
         {"trace", std::move(trace)}};
  return j.dump(2) + "\n";
}

LearnResult parse_learn_result(std::string_view text) {
  const json j = parse_json(text, "learn result");
  return guarded("learn result", [&] {
    LearnResult r;
    r.params = blocks_from(j.at("params"));
    r.log_z = j.at("log_z").get<double>();
    r.converged = j.value("converged", false);
    r.stop_reason = j.value("stop_reason", std::string{});
    if (j.contains("gradient")) r.gradient = blocks_from(j.at("gradient"));
    for (const auto& rec : j.value("trace", json::array())) {
      r.trace.push_back({rec.at("iteration").get<int>(), rec.at("loglik").get<double>(),
                         rec.at("grad_norm").get<double>()});
    }
    return r;
  });
}

std::string marginals_to_json(const MarginalSet& m) {
  json j{{"length", m.length},
         {"num_states", m.num_states},
         {"num_actions", m.num_actions},
         {"discount", m.discount},
         {"log_z", m.log_z},
         {"p_s", m.p_s}};
  if (m.has_state_action) j["p_sa"] = m.p_sa;
  if (m.has_transition) j["p_sas"] = m.p_sas;
  return j.dump() + "\n";
}

MarginalSet parse_marginals(std::string_view text) {
  const json j = parse_json(text, "marginals");
  return guarded("marginals", [&] {
    MarginalSet m;
    m.length = j.at("length").get<int>();
    m.num_states = j.at("num_states").get<int>();
    m.num_actions = j.at("num_actions").get<int>();
    m.discount = j.at("discount").get<double>();
    m.log_z = j.at("log_z").get<double>();
    m.p_s = j.at("p_s").get<std::vector<double>>();
    m.has_state_action = j.contains("p_sa");
    m.has_transition = j.contains("p_sas");
    if (m.has_state_action) m.p_sa = j.at("p_sa").get<std::vector<double>>();
    if (m.has_transition) m.p_sas = j.at("p_sas").get<std::vector<double>>();
    const std::size_t L = static_cast<std::size_t>(m.length);
    const std::size_t n = static_cast<std::size_t>(m.num_states);
    const std::size_t steps = L > 0 ? L - 1 : 0;
    require(m.p_s.size() == L * n, "marginals: p_s has the wrong size");
    require(!m.has_state_action || m.p_sa.size() == steps * n * m.num_actions,
            "marginals: p_sa has the wrong size");
    require(!m.has_transition || m.p_sas.size() == steps * n * m.num_actions * n,
            "marginals: p_sas has the wrong size");
    return m;
  });
}

}  // namespace maxent
