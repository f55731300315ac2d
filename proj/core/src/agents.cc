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
#include "monomix/agents.h"

#include <algorithm>
#include <string>

#include "monomix/errors.h"
#include "monomix/ops.h"

namespace monomix {
namespace {

constexpr const char* kGateNames[] = {"z", "r", "n"};

std::string P(const std::string& suffix) { return "agent." + suffix; }

}  // namespace

void AgentInputLayout::Fill(std::span<const double> obs, int previous_action,
                            int agent, std::span<double> out) const {
  if (static_cast<int>(obs.size()) != obs_dim ||
      static_cast<int>(out.size()) != dim()) {
    throw DimensionError("agent input: observation has " +
                         std::to_string(obs.size()) + " features, expected " +
                         std::to_string(obs_dim));
  }
  if (agent < 0 || agent >= n_agents) {
    throw ContractError("agent id " + std::to_string(agent) + " out of range");
  }
  std::fill(out.begin(), out.end(), 0.0);
  std::copy(obs.begin(), obs.end(), out.begin());
  std::size_t offset = static_cast<std::size_t>(obs_dim);
  if (last_action) {
    if (previous_action >= n_actions) {
      throw ContractError("last action out of range");
    }
    if (previous_action >= 0) {
      out[offset + static_cast<std::size_t>(previous_action)] = 1.0;
    }
    offset += static_cast<std::size_t>(n_actions);
  }
  out[offset + static_cast<std::size_t>(agent)] = 1.0;
}

AgentNet::AgentNet(AgentNetConfig config) : config_(config) {
  if (config_.input_dim < 1 || config_.hidden_dim < 1 ||
      config_.n_actions < 1) {
    throw ConfigError("agent network dimensions must be positive");
  }
}

void AgentNet::AddParameters(ParameterSet& params, Rng& rng) const {
  const auto in = static_cast<std::size_t>(config_.input_dim);
  const auto h = static_cast<std::size_t>(config_.hidden_dim);
  const auto u = static_cast<std::size_t>(config_.n_actions);
  auto add = [&](const std::string& name, Shape shape, std::size_t fan_in) {
    Tensor t(std::move(shape));
    InitFanIn(t, fan_in, rng);
    params.Add(P(name), std::move(t));
  };
  add("fc1.weight", {h, in}, in);
  add("fc1.bias", {h}, in);
  if (config_.recurrent) {
    for (const char* g : kGateNames) {
      add(std::string("gru.w_i") + g, {h, h}, h);
      add(std::string("gru.b_i") + g, {h}, h);
    }
    for (const char* g : kGateNames) {
      add(std::string("gru.w_h") + g, {h, h}, h);
      add(std::string("gru.b_h") + g, {h}, h);
    }
  }
  add("fc2.weight", {u, h}, h);
  add("fc2.bias", {u}, h);
}

AgentNet::Output AgentNet::Forward(Tape& tape, const ParameterSet& params,
                                   Var inputs, Var hidden) const {
  const Tensor& x = inputs.value();
  if (x.rank() != 2 || static_cast<int>(x.cols()) != config_.input_dim) {
    throw DimensionError("agent net: input " + x.shape_string() +
                         " does not have " +
                         std::to_string(config_.input_dim) + " columns");
  }
  auto p = [&](const std::string& name) {
    return tape.Parameter(params, P(name));
  };
  Var a = Relu(Linear(inputs, p("fc1.weight"), p("fc1.bias")));
  Var next = hidden;
  if (config_.recurrent) {
    GruWeights w{p("gru.w_iz"), p("gru.w_ir"), p("gru.w_in"),
                 p("gru.w_hz"), p("gru.w_hr"), p("gru.w_hn"),
                 p("gru.b_iz"), p("gru.b_ir"), p("gru.b_in"),
                 p("gru.b_hz"), p("gru.b_hr"), p("gru.b_hn")};
    next = GruCell(a, hidden, w);
    a = next;
  }
  Var q = Linear(a, p("fc2.weight"), p("fc2.bias"));
  return {q, next};
}

Tensor AgentNet::InitialHidden(int rows) const {
  return Tensor({static_cast<std::size_t>(rows),
                 static_cast<std::size_t>(config_.hidden_dim)});
}

int MaskedArgmax(std::span<const double> q,
                 std::span<const std::uint8_t> mask) {
  if (q.size() != mask.size()) {
    throw DimensionError("argmax: " + std::to_string(q.size()) +
                         " values but mask of " + std::to_string(mask.size()));
  }
  int best = -1;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!mask[i]) continue;
    if (best < 0 || q[i] > q[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw ContractError("no available action");
  return best;
}

std::vector<int> SelectActions(const Tensor& q,
                               const std::vector<ActionMask>& masks,
                               double epsilon, Rng& rng) {
  if (q.rank() != 2 || q.rows() != masks.size()) {
    throw DimensionError("select_actions: q " + q.shape_string() + " for " +
                         std::to_string(masks.size()) + " masks");
  }
  std::vector<int> actions(masks.size());
  for (std::size_t a = 0; a < masks.size(); ++a) {
    const ActionMask& mask = masks[a];
    std::vector<int> available;
    for (std::size_t k = 0; k < mask.size(); ++k) {
      if (mask[k]) available.push_back(static_cast<int>(k));
    }
    if (available.empty()) {
      throw ContractError("agent " + std::to_string(a) +
                          " has no available action");
    }
    const bool explore = epsilon > 0.0 && UniformReal(rng, 0.0, 1.0) < epsilon;
    if (explore) {
      actions[a] = available[static_cast<std::size_t>(
          UniformInt(rng, 0, static_cast<int>(available.size()) - 1))];
    } else {
      actions[a] = MaskedArgmax(
          q.data().subspan(a * q.cols(), q.cols()), mask);
    }
  }
  return actions;
}

double EpsilonSchedule::operator()(std::int64_t t) const {
  if (t < 0) throw ContractError("epsilon schedule: negative time");
  if (anneal_steps <= 0 || t >= anneal_steps) return finish;
  const double frac = static_cast<double>(t) / static_cast<double>(anneal_steps);
  return start + (finish - start) * frac;
}

DecentralisedPolicy::DecentralisedPolicy(const AgentNet& net,
                                         const ParameterSet& params,
                                         AgentInputLayout layout)
    : net_(&net), params_(&params), layout_(layout) {
  if (layout_.dim() != net.config().input_dim) {
    throw DimensionError("policy input layout does not match the network");
  }
  Reset();
}

void DecentralisedPolicy::Reset() {
  hidden_ = net_->InitialHidden(layout_.n_agents);
  last_actions_.assign(static_cast<std::size_t>(layout_.n_agents), -1);
}

Tensor DecentralisedPolicy::QValues(
    const std::vector<std::vector<double>>& observations) {
  if (static_cast<int>(observations.size()) != layout_.n_agents) {
    throw DimensionError("policy expects one observation per agent");
  }
  const auto n = static_cast<std::size_t>(layout_.n_agents);
  const auto d = static_cast<std::size_t>(layout_.dim());
  Tensor inputs({n, d});
  for (std::size_t a = 0; a < n; ++a) {
    layout_.Fill(observations[a], last_actions_[a], static_cast<int>(a),
                 inputs.data().subspan(a * d, d));
  }
  Tape tape(Tape::Mode::kInference);
  AgentNet::Output out = net_->Forward(tape, *params_,
                                       tape.Constant(std::move(inputs)),
                                       tape.Constant(hidden_));
  hidden_ = out.hidden.value();
  return out.q.value();
}

std::vector<int> DecentralisedPolicy::Act(
    const std::vector<std::vector<double>>& observations,
    const std::vector<ActionMask>& masks, double epsilon, Rng& rng) {
  const Tensor q = QValues(observations);
  std::vector<int> actions = SelectActions(q, masks, epsilon, rng);
  last_actions_ = actions;
  return actions;
}

}  // namespace monomix
