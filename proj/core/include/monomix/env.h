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
#ifndef MONOMIX_ENV_H_
#define MONOMIX_ENV_H_

#include <cstdint>
#include <span>
#include <vector>

namespace monomix {

// Dimensions of a cooperative Dec-POMDP.
struct EnvSpec {
  int n_agents = 1;
  int n_actions = 1;
  int obs_dim = 1;
  int state_dim = 1;
  int episode_limit = 1;
  double gamma = 0.99;

  // Throws ConfigError unless every dimension is >= 1 and 0 <= gamma < 1.
  void Validate() const;

  friend bool operator==(const EnvSpec&, const EnvSpec&) = default;
};

struct StepResult {
  double reward = 0.0;  // shared by the whole team
  bool terminated = false;
  bool truncated = false;  // episode_limit reached without termination
};

// One byte per action: 1 = available.
using ActionMask = std::vector<std::uint8_t>;

struct Observation {
  std::vector<std::vector<double>> agents;
  std::vector<double> state;
};

class MultiAgentEnv {
 public:
  virtual ~MultiAgentEnv() = default;

  virtual const EnvSpec& spec() const = 0;

  // Deterministic in 'seed'.
  virtual Observation Reset(std::uint64_t seed) = 0;

  // Throws ContractError if an action is unavailable to its agent.
  virtual StepResult Step(std::span<const int> joint_action) = 0;

  virtual std::vector<double> AgentObservation(int agent) const = 0;
  virtual std::vector<double> State() const = 0;
  virtual ActionMask AvailableActions(int agent) const = 0;

  virtual int steps() const = 0;
  virtual bool done() const = 0;
  // True once the episode ended in a win (micro-combat only).
  virtual bool won() const { return false; }

  Observation Observe() const;
};

// Throws ContractError naming the agent and action when 'joint_action' has
// the wrong arity or selects an unavailable action.
void CheckJointAction(const MultiAgentEnv& env,
                      std::span<const int> joint_action);

}  // namespace monomix

#endif  // MONOMIX_ENV_H_
