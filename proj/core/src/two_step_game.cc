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
#include "monomix/two_step_game.h"

#include "monomix/errors.h"

namespace monomix {

TwoStepGame::TwoStepGame(double gamma) {
  spec_.n_agents = 2;
  spec_.n_actions = 2;
  spec_.obs_dim = 3;
  spec_.state_dim = 3;
  spec_.episode_limit = 2;
  spec_.gamma = gamma;
  spec_.Validate();
}

Observation TwoStepGame::Reset(std::uint64_t /*seed*/) {
  phase_ = Phase::kState1;
  step_ = 0;
  return Observe();
}

std::vector<double> TwoStepGame::EncodePhase(Phase phase) {
  std::vector<double> v(3, 0.0);
  switch (phase) {
    case Phase::kState1: v[0] = 1.0; break;
    case Phase::kState2A: v[1] = 1.0; break;
    case Phase::kState2B: v[2] = 1.0; break;
    case Phase::kTerminal: break;
  }
  return v;
}

void TwoStepGame::SetPhase(Phase phase, int step) {
  phase_ = phase;
  step_ = step;
}

std::vector<double> TwoStepGame::AgentObservation(int /*agent*/) const {
  return EncodePhase(phase_);
}

std::vector<double> TwoStepGame::State() const { return EncodePhase(phase_); }

ActionMask TwoStepGame::AvailableActions(int /*agent*/) const {
  return ActionMask{1, 1};
}

StepResult TwoStepGame::Step(std::span<const int> joint_action) {
  if (done()) throw ContractError("Step() on a finished two-step game");
  CheckJointAction(*this, joint_action);
  StepResult result;
  ++step_;
  switch (phase_) {
    case Phase::kState1:
      phase_ = joint_action[0] == kActionA ? Phase::kState2A : Phase::kState2B;
      break;
    case Phase::kState2A:
      result.reward = kPayoff2A[joint_action[0]][joint_action[1]];
      result.terminated = true;
      phase_ = Phase::kTerminal;
      break;
    case Phase::kState2B:
      result.reward = kPayoff2B[joint_action[0]][joint_action[1]];
      result.terminated = true;
      phase_ = Phase::kTerminal;
      break;
    case Phase::kTerminal:
      break;
  }
  return result;
}

}  // namespace monomix
