// Copyright 2026 The monomix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "monomix/episode.h"

#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "monomix/errors.h"

namespace monomix {

void EnvSpec::Validate() const {
  if (n_agents < 1 || n_actions < 1 || obs_dim < 1 || state_dim < 1 ||
      episode_limit < 1) {
    throw ConfigError("EnvSpec dimensions must all be >= 1");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw ConfigError("EnvSpec gamma must lie in [0, 1)");
  }
}

Observation MultiAgentEnv::Observe() const {
  Observation o;
  for (int a = 0; a < spec().n_agents; ++a) {
    o.agents.push_back(AgentObservation(a));
  }
  o.state = State();
  return o;
}

void CheckJointAction(const MultiAgentEnv& env,
                      std::span<const int> joint_action) {
  const EnvSpec& spec = env.spec();
  if (static_cast<int>(joint_action.size()) != spec.n_agents) {
    throw ContractError("joint action has " +
                        std::to_string(joint_action.size()) +
                        " entries, expected " + std::to_string(spec.n_agents));
  }
  for (int a = 0; a < spec.n_agents; ++a) {
    const int u = joint_action[a];
    if (u < 0 || u >= spec.n_actions || !env.AvailableActions(a)[u]) {
      throw ContractError("agent " + std::to_string(a) +
                          " chose unavailable action " + std::to_string(u));
    }
  }
}

std::span<const double> Episode::obs_at(int t, int agent) const {
  const std::size_t d = static_cast<std::size_t>(spec.obs_dim);
  return std::span<const double>(obs).subspan(
      (static_cast<std::size_t>(t) * spec.n_agents + agent) * d, d);
}

std::span<const double> Episode::state_at(int t) const {
  const std::size_t d = static_cast<std::size_t>(spec.state_dim);
  return std::span<const double>(state).subspan(t * d, d);
}

std::span<const std::uint8_t> Episode::avail_at(int t, int agent) const {
  const std::size_t u = static_cast<std::size_t>(spec.n_actions);
  return std::span<const std::uint8_t>(avail).subspan(
      (static_cast<std::size_t>(t) * spec.n_agents + agent) * u, u);
}

double Episode::Return() const {
  double total = 0.0;
  for (double r : rewards) total += r;
  return total;
}

EpisodeBuilder::EpisodeBuilder(const MultiAgentEnv& env) {
  episode_.spec = env.spec();
  AppendObservation(env);
}

void EpisodeBuilder::AppendObservation(const MultiAgentEnv& env) {
  const EnvSpec& s = episode_.spec;
  for (int a = 0; a < s.n_agents; ++a) {
    const auto o = env.AgentObservation(a);
    if (static_cast<int>(o.size()) != s.obs_dim) {
      throw DimensionError("observation length " + std::to_string(o.size()) +
                           " != obs_dim " + std::to_string(s.obs_dim));
    }
    episode_.obs.insert(episode_.obs.end(), o.begin(), o.end());
    const ActionMask m = env.AvailableActions(a);
    episode_.avail.insert(episode_.avail.end(), m.begin(), m.end());
  }
  const auto st = env.State();
  if (static_cast<int>(st.size()) != s.state_dim) {
    throw DimensionError("state length " + std::to_string(st.size()) +
                         " != state_dim " + std::to_string(s.state_dim));
  }
  episode_.state.insert(episode_.state.end(), st.begin(), st.end());
}

void EpisodeBuilder::AddStep(std::span<const int> joint_action,
                             const StepResult& result,
                             const MultiAgentEnv& env) {
  episode_.actions.insert(episode_.actions.end(), joint_action.begin(),
                          joint_action.end());
  episode_.rewards.push_back(result.reward);
  episode_.terminated.push_back(result.terminated ? 1 : 0);
  episode_.truncated = result.truncated;
  ++episode_.length;
  AppendObservation(env);
  episode_.won = env.won();
}

Episode EpisodeBuilder::Finish() && { return std::move(episode_); }

void WriteTrace(std::ostream& out, const Episode& ep) {
  using nlohmann::json;
  const EnvSpec& s = ep.spec;
  json header = {{"spec",
                  {{"n_agents", s.n_agents},
                   {"n_actions", s.n_actions},
                   {"obs_dim", s.obs_dim},
                   {"state_dim", s.state_dim},
                   {"episode_limit", s.episode_limit},
                   {"gamma", s.gamma}}},
                 {"length", ep.length}};
  out << header.dump() << '\n';
  for (int t = 0; t <= ep.length; ++t) {
    json rec;
    rec["t"] = t;
    auto st = ep.state_at(t);
    rec["state"] = std::vector<double>(st.begin(), st.end());
    json obs = json::array();
    json avail = json::array();
    for (int a = 0; a < s.n_agents; ++a) {
      auto o = ep.obs_at(t, a);
      obs.push_back(std::vector<double>(o.begin(), o.end()));
      auto m = ep.avail_at(t, a);
      avail.push_back(std::vector<int>(m.begin(), m.end()));
    }
    rec["obs"] = std::move(obs);
    rec["avail"] = std::move(avail);
    if (t < ep.length) {
      std::vector<int> actions(s.n_agents);
      for (int a = 0; a < s.n_agents; ++a) actions[a] = ep.action(t, a);
      rec["actions"] = actions;
      rec["reward"] = ep.rewards[t];
      rec["terminated"] = ep.terminated[t] != 0;
      const bool last = t + 1 == ep.length;
      rec["truncated"] = last && ep.truncated;
      rec["won"] = last && ep.won;
    } else {
      rec["final"] = true;
    }
    out << rec.dump() << '\n';
  }
}

Episode ReadTrace(std::istream& in) {
  using nlohmann::json;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty trace");
  Episode ep;
  try {
    json header = json::parse(line);
    const json& s = header.at("spec");
    ep.spec.n_agents = s.at("n_agents");
    ep.spec.n_actions = s.at("n_actions");
    ep.spec.obs_dim = s.at("obs_dim");
    ep.spec.state_dim = s.at("state_dim");
    ep.spec.episode_limit = s.at("episode_limit");
    ep.spec.gamma = s.at("gamma");
    const int length = header.at("length");
    for (int t = 0; t <= length; ++t) {
      if (!std::getline(in, line)) {
        throw FormatError("trace ended before step " + std::to_string(t));
      }
      json rec = json::parse(line);
      if (rec.at("t").get<int>() != t) throw FormatError("trace out of order");
      auto st = rec.at("state").get<std::vector<double>>();
      ep.state.insert(ep.state.end(), st.begin(), st.end());
      for (int a = 0; a < ep.spec.n_agents; ++a) {
        auto o = rec.at("obs").at(a).get<std::vector<double>>();
        ep.obs.insert(ep.obs.end(), o.begin(), o.end());
        auto m = rec.at("avail").at(a).get<std::vector<int>>();
        for (int v : m) ep.avail.push_back(static_cast<std::uint8_t>(v));
      }
      if (t < length) {
        auto actions = rec.at("actions").get<std::vector<int>>();
        ep.actions.insert(ep.actions.end(), actions.begin(), actions.end());
        ep.rewards.push_back(rec.at("reward").get<double>());
        ep.terminated.push_back(rec.at("terminated").get<bool>() ? 1 : 0);
        if (t + 1 == length) {
          ep.truncated = rec.at("truncated").get<bool>();
          ep.won = rec.at("won").get<bool>();
        }
      }
    }
    ep.length = length;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed trace: ") + e.what());
  }
  return ep;
}

}  // namespace monomix
