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
#include "monomix/mixers.h"

#include <string>

#include "monomix/agents.h"
#include "monomix/errors.h"
#include "monomix/ops.h"

namespace monomix {
namespace {

std::string P(const std::string& suffix) { return "mixer." + suffix; }

}  // namespace

std::string_view MixerKindName(MixerKind kind) {
  switch (kind) {
    case MixerKind::kNone: return "iql";
    case MixerKind::kVdn: return "vdn";
    case MixerKind::kVdnS: return "vdn_s";
    case MixerKind::kQmix: return "qmix";
    case MixerKind::kQmixLin: return "qmix_lin";
    case MixerKind::kQmixNs: return "qmix_ns";
  }
  return "unknown";
}

MixerKind ParseMixerKind(std::string_view name) {
  for (MixerKind k : {MixerKind::kNone, MixerKind::kVdn, MixerKind::kVdnS,
                      MixerKind::kQmix, MixerKind::kQmixLin,
                      MixerKind::kQmixNs}) {
    if (MixerKindName(k) == name) return k;
  }
  throw ConfigError("unknown mixer '" + std::string(name) + "'");
}

Mixer::Mixer(MixerConfig config) : config_(config) {
  if (config_.n_agents < 1 || config_.state_dim < 1 ||
      config_.mixing_hidden < 1 || config_.hypernet_hidden < 1) {
    throw ConfigError("mixer dimensions must be positive");
  }
}

void Mixer::AddParameters(ParameterSet& params, Rng& rng) const {
  const auto n = static_cast<std::size_t>(config_.n_agents);
  const auto s = static_cast<std::size_t>(config_.state_dim);
  const auto h = static_cast<std::size_t>(config_.mixing_hidden);
  const auto hh = static_cast<std::size_t>(config_.hypernet_hidden);
  auto add = [&](const std::string& name, Shape shape, std::size_t fan_in) {
    Tensor t(std::move(shape));
    InitFanIn(t, fan_in, rng);
    params.Add(P(name), std::move(t));
  };
  auto linear = [&](const std::string& name, std::size_t out,
                    std::size_t in) {
    add(name + ".weight", {out, in}, in);
    add(name + ".bias", {out}, in);
  };
  switch (config_.kind) {
    case MixerKind::kNone:
    case MixerKind::kVdn:
      break;
    case MixerKind::kVdnS:
      linear("v.fc1", hh, s);
      linear("v.fc2", 1, hh);
      break;
    case MixerKind::kQmix:
      linear("hyper_w1", n * h, s);
      linear("hyper_b1", h, s);
      linear("hyper_w2", h, s);
      linear("hyper_b2.fc1", hh, s);
      linear("hyper_b2.fc2", 1, hh);
      break;
    case MixerKind::kQmixLin:
      linear("hyper_w", n, s);
      linear("hyper_b2.fc1", hh, s);
      linear("hyper_b2.fc2", 1, hh);
      break;
    case MixerKind::kQmixNs:
      linear("layer1", h, n);
      linear("layer2", 1, h);
      break;
  }
}

Var Mixer::Forward(Tape& tape, const ParameterSet& params, Var qs,
                   Var states) const {
  const Tensor& q = qs.value();
  const Tensor& st = states.value();
  if (q.rank() != 2 || static_cast<int>(q.cols()) != config_.n_agents) {
    throw DimensionError("mixer: qs " + q.shape_string() + " expected " +
                         std::to_string(config_.n_agents) + " columns");
  }
  if (st.rank() != 2 || static_cast<int>(st.cols()) != config_.state_dim ||
      st.rows() != q.rows()) {
    throw DimensionError("mixer: states " + st.shape_string() +
                         " do not match qs " + q.shape_string() +
                         " and state_dim " +
                         std::to_string(config_.state_dim));
  }
  auto p = [&](const std::string& name) {
    return tape.Parameter(params, P(name));
  };
  auto linear = [&](Var x, const std::string& name) {
    return Linear(x, p(name + ".weight"), p(name + ".bias"));
  };
  auto final_bias = [&](const std::string& name) {
    return linear(Relu(linear(states, name + ".fc1")), name + ".fc2");
  };
  switch (config_.kind) {
    case MixerKind::kNone:
      throw ContractError("independent learners have no joint value");
    case MixerKind::kVdn:
      return RowSum(qs);
    case MixerKind::kVdnS:
      return Add(RowSum(qs), final_bias("v"));
    case MixerKind::kQmix: {
      Var w1 = Abs(linear(states, "hyper_w1"));
      Var b1 = linear(states, "hyper_b1");
      Var hidden = Elu(Add(BatchedVecMat(qs, w1), b1));
      Var w2 = Abs(linear(states, "hyper_w2"));
      return Add(RowDot(hidden, w2), final_bias("hyper_b2"));
    }
    case MixerKind::kQmixLin: {
      Var w = Abs(linear(states, "hyper_w"));
      return Add(RowDot(qs, w), final_bias("hyper_b2"));
    }
    case MixerKind::kQmixNs: {
      Var hidden =
          Elu(Linear(qs, Abs(p("layer1.weight")), p("layer1.bias")));
      return Linear(hidden, Abs(p("layer2.weight")), p("layer2.bias"));
    }
  }
  throw ContractError("unhandled mixer kind");
}

double Mixer::Evaluate(const ParameterSet& params, std::span<const double> qs,
                       std::span<const double> state) const {
  Tape tape(Tape::Mode::kInference);
  Var q = tape.Constant(Tensor::Matrix(
      1, qs.size(), std::vector<double>(qs.begin(), qs.end())));
  Var s = tape.Constant(Tensor::Matrix(
      1, state.size(), std::vector<double>(state.begin(), state.end())));
  return Forward(tape, params, q, s).item();
}

JointGreedy JointGreedyValue(const Mixer& mixer, const ParameterSet& params,
                             const Tensor& agent_q,
                             const std::vector<ActionMask>& masks,
                             std::span<const double> state) {
  if (agent_q.rank() != 2 || agent_q.rows() != masks.size()) {
    throw DimensionError("joint greedy: q " + agent_q.shape_string() +
                         " for " + std::to_string(masks.size()) + " masks");
  }
  JointGreedy out;
  std::vector<double> chosen;
  for (std::size_t a = 0; a < masks.size(); ++a) {
    const auto row = agent_q.data().subspan(a * agent_q.cols(), agent_q.cols());
    const int best = MaskedArgmax(row, masks[a]);
    out.actions.push_back(best);
    chosen.push_back(row[static_cast<std::size_t>(best)]);
  }
  out.q_tot = mixer.Evaluate(params, chosen, state);
  return out;
}

}  // namespace monomix
