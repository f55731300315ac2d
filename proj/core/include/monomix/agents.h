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
#ifndef MONOMIX_AGENTS_H_
#define MONOMIX_AGENTS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "monomix/autodiff.h"
#include "monomix/env.h"
#include "monomix/parameters.h"
#include "monomix/random.h"
#include "monomix/tensor.h"

namespace monomix {

// Layout of one agent's network input: observation, optional one-hot last
// action, one-hot agent id.
struct AgentInputLayout {
  int obs_dim = 1;
  int n_actions = 1;
  int n_agents = 1;
  bool last_action = true;

  int dim() const {
    return obs_dim + (last_action ? n_actions : 0) + n_agents;
  }
  // Writes the input row for 'agent' into 'out' (length dim()). A negative
  // 'previous_action' encodes "no previous action".
  void Fill(std::span<const double> obs, int previous_action, int agent,
            std::span<double> out) const;
};

struct AgentNetConfig {
  int input_dim = 1;
  int hidden_dim = 64;
  int n_actions = 1;
  // GRU between the two linear layers when true; ReLU feed-forward otherwise.
  bool recurrent = true;
};

// Per-agent utility network with parameters shared by every agent:
// fc1 -> ReLU -> GRU -> fc2 (recurrent) or fc1 -> ReLU -> fc2.
// Parameters live in a caller-owned ParameterSet under the "agent." prefix.
class AgentNet {
 public:
  struct Output {
    Var q;       // [N x n_actions]
    Var hidden;  // [N x hidden_dim]
  };

  explicit AgentNet(AgentNetConfig config);

  const AgentNetConfig& config() const { return config_; }

  void AddParameters(ParameterSet& params, Rng& rng) const;

  // 'inputs' is [N x input_dim], 'hidden' is [N x hidden_dim]. The feed-forward
  // variant passes 'hidden' through unchanged.
  Output Forward(Tape& tape, const ParameterSet& params, Var inputs,
                 Var hidden) const;

  Tensor InitialHidden(int rows) const;

 private:
  AgentNetConfig config_;
};

// Lowest-index argmax of q over available actions. Throws ContractError on an
// all-false mask.
int MaskedArgmax(std::span<const double> q, std::span<const std::uint8_t> mask);

// Independent epsilon-greedy choice per agent. 'q' is [n x U].
std::vector<int> SelectActions(const Tensor& q,
                               const std::vector<ActionMask>& masks,
                               double epsilon, Rng& rng);

// Linear from 'start' to 'finish' over 'anneal_steps' environment steps, then
// flat.
struct EpsilonSchedule {
  double start = 1.0;
  double finish = 0.05;
  std::int64_t anneal_steps = 50000;

  double operator()(std::int64_t t) const;
};

// Rollout-side wrapper carrying hidden states and last actions for a team of
// agents driven by one shared network.
class DecentralisedPolicy {
 public:
  DecentralisedPolicy(const AgentNet& net, const ParameterSet& params,
                      AgentInputLayout layout);

  // Zeroes hidden states and clears last actions.
  void Reset();

  // Utilities for every agent given the current observations; advances the
  // hidden state. Result is [n x U].
  Tensor QValues(const std::vector<std::vector<double>>& observations);

  // QValues followed by epsilon-greedy selection; remembers the actions as
  // the next step's last actions.
  std::vector<int> Act(const std::vector<std::vector<double>>& observations,
                       const std::vector<ActionMask>& masks, double epsilon,
                       Rng& rng);

  const Tensor& hidden() const { return hidden_; }

 private:
  const AgentNet* net_;
  const ParameterSet* params_;
  AgentInputLayout layout_;
  Tensor hidden_;
  std::vector<int> last_actions_;
};

}  // namespace monomix

#endif  // MONOMIX_AGENTS_H_
