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
#ifndef MONOMIX_EPISODE_H_
#define MONOMIX_EPISODE_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "monomix/env.h"

namespace monomix {

// A complete episode of T transitions. Observations, states and action masks
// are stored for T + 1 time steps so the final step can be bootstrapped when
// the episode was truncated by the time limit.
struct Episode {
  EnvSpec spec;
  int length = 0;
  std::vector<double> obs;            // (T+1) x n x obs_dim
  std::vector<double> state;          // (T+1) x state_dim
  std::vector<std::uint8_t> avail;    // (T+1) x n x n_actions
  std::vector<int> actions;           // T x n
  std::vector<double> rewards;        // T
  std::vector<std::uint8_t> terminated;  // T
  bool truncated = false;
  bool won = false;

  std::span<const double> obs_at(int t, int agent) const;
  std::span<const double> state_at(int t) const;
  std::span<const std::uint8_t> avail_at(int t, int agent) const;
  int action(int t, int agent) const {
    return actions[static_cast<std::size_t>(t * spec.n_agents + agent)];
  }
  double Return() const;

  friend bool operator==(const Episode&, const Episode&) = default;
};

class EpisodeBuilder {
 public:
  explicit EpisodeBuilder(const MultiAgentEnv& env);

  // Records the current (post-step) observation of 'env' along with the
  // transition that produced it.
  void AddStep(std::span<const int> joint_action, const StepResult& result,
               const MultiAgentEnv& env);

  Episode Finish() &&;
  const Episode& partial() const { return episode_; }

 private:
  void AppendObservation(const MultiAgentEnv& env);
  Episode episode_;
};

// Line-delimited JSON replay trace. The first line is a header carrying the
// EnvSpec; each following line is one time step with its state, per-agent
// observations and action masks, and (except the final line) the joint
// action, reward and flags.
void WriteTrace(std::ostream& out, const Episode& episode);
Episode ReadTrace(std::istream& in);

}  // namespace monomix

#endif  // MONOMIX_EPISODE_H_
