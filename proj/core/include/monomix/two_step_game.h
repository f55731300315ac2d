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
#ifndef MONOMIX_TWO_STEP_GAME_H_
#define MONOMIX_TWO_STEP_GAME_H_

#include <array>

#include "monomix/env.h"

namespace monomix {

// Two-agent cooperative game lasting exactly two steps. On the first step
// agent 0's action picks which payoff matrix is played next (A -> 2A, B -> 2B)
// and agent 1's action is ignored; the second step pays out from that matrix.
class TwoStepGame : public MultiAgentEnv {
 public:
  enum class Phase { kState1, kState2A, kState2B, kTerminal };
  static constexpr int kActionA = 0;
  static constexpr int kActionB = 1;

  // Payoffs indexed [agent 0 action][agent 1 action].
  static constexpr std::array<std::array<double, 2>, 2> kPayoff2A{
      {{7.0, 7.0}, {7.0, 7.0}}};
  static constexpr std::array<std::array<double, 2>, 2> kPayoff2B{
      {{0.0, 1.0}, {1.0, 8.0}}};

  explicit TwoStepGame(double gamma = 0.99);

  const EnvSpec& spec() const override { return spec_; }
  Observation Reset(std::uint64_t seed) override;
  StepResult Step(std::span<const int> joint_action) override;
  std::vector<double> AgentObservation(int agent) const override;
  std::vector<double> State() const override;
  ActionMask AvailableActions(int agent) const override;
  int steps() const override { return step_; }
  bool done() const override { return phase_ == Phase::kTerminal; }

  Phase phase() const { return phase_; }
  // Places the game in an arbitrary non-terminal phase (used to tabulate
  // learned values).
  void SetPhase(Phase phase, int step);

  // One-hot over {State1, State2A, State2B}; zeros once terminal.
  static std::vector<double> EncodePhase(Phase phase);

 private:
  EnvSpec spec_;
  Phase phase_ = Phase::kState1;
  int step_ = 0;
};

}  // namespace monomix

#endif  // MONOMIX_TWO_STEP_GAME_H_
