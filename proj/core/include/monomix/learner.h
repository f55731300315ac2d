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
#ifndef MONOMIX_LEARNER_H_
#define MONOMIX_LEARNER_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "monomix/agents.h"
#include "monomix/autodiff.h"
#include "monomix/env.h"
#include "monomix/episode.h"
#include "monomix/mixers.h"
#include "monomix/parameters.h"
#include "monomix/random.h"
#include "monomix/replay_buffer.h"
#include "monomix/rmsprop.h"

namespace monomix {

// B episodes padded to the longest one (T steps), stored time-major. Step
// quantities have T rows of B; observation quantities have T + 1 rows so the
// last real step can bootstrap. Padding is zero-filled.
struct EpisodeBatch {
  EnvSpec spec;
  int batch_size = 0;
  int max_length = 0;                 // T
  std::vector<double> obs;            // (T+1) x B x n x obs_dim
  std::vector<double> state;          // (T+1) x B x state_dim
  std::vector<std::uint8_t> avail;    // (T+1) x B x n x n_actions
  std::vector<int> actions;           // T x B x n
  std::vector<double> rewards;        // T x B
  std::vector<double> terminated;     // T x B
  std::vector<double> filled;         // T x B, a prefix of ones per episode
  std::vector<int> lengths;           // B

  std::size_t step_index(int t, int b) const {
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(batch_size) +
           static_cast<std::size_t>(b);
  }
  double FilledCount() const;
};

EpisodeBatch MakeBatch(const std::vector<const Episode*>& episodes);

struct LearnerConfig {
  MixerKind mixer = MixerKind::kQmix;
  int agent_hidden = 64;
  bool recurrent = true;
  bool last_action_input = true;
  int mixing_hidden = 32;
  int hypernet_hidden = 32;
  double gamma = 0.99;
  RmsPropOptions optimizer;
  int batch_size = 32;
  int target_update_episodes = 200;
};

struct TrainMetrics {
  double loss = 0.0;
  double grad_norm = 0.0;
};

// Bootstrap targets. Factored mixers produce one target per step (T x B);
// independent learners produce one per agent (T x B x n).
std::vector<double> ComputeTargets(const EpisodeBatch& batch,
                                   const AgentNet& agent, const Mixer& mixer,
                                   const AgentInputLayout& layout,
                                   const ParameterSet& target_params,
                                   double gamma);

// Squared TD error over filled steps, averaged by the filled count (and by
// the number of agents for independent learners). 'params' must hold both
// the agent and the mixer parameters.
Var BuildLoss(Tape& tape, const EpisodeBatch& batch, const AgentNet& agent,
              const Mixer& mixer, const AgentInputLayout& layout,
              const ParameterSet& params, const std::vector<double>& targets);

// Unrolls the agent network over the first 'steps' time steps of the batch
// from a zero hidden state. Result[t] is [(B*n) x U].
std::vector<Var> UnrollAgents(Tape& tape, const EpisodeBatch& batch,
                              const AgentNet& agent,
                              const AgentInputLayout& layout,
                              const ParameterSet& params, int steps);

// Online and target networks, optimiser state and the target schedule for
// one experiment.
class Learner {
 public:
  Learner(const EnvSpec& spec, LearnerConfig config, std::uint64_t seed);

  const LearnerConfig& config() const { return config_; }
  const EnvSpec& spec() const { return spec_; }
  const AgentNet& agent() const { return agent_; }
  const Mixer& mixer() const { return mixer_; }
  const AgentInputLayout& layout() const { return layout_; }
  const ParameterSet& params() const { return params_; }
  ParameterSet& mutable_params() { return params_; }
  const ParameterSet& target_params() const { return target_; }
  const RmsProp& optimizer() const { return optimizer_; }

  // One gradient step on 'batch'. Throws DivergenceError on a non-finite
  // loss or gradient.
  TrainMetrics Train(const EpisodeBatch& batch);

  // Loss value and gradients without updating anything.
  TrainMetrics Evaluate(const EpisodeBatch& batch, Gradients* grads) const;

  void SyncTarget();
  // Hard copy whenever 'episodes_seen' is a positive multiple of the period.
  // Returns true when a copy happened.
  bool MaybeSyncTarget(std::int64_t episodes_seen);

  DecentralisedPolicy MakePolicy() const {
    return DecentralisedPolicy(agent_, params_, layout_);
  }

 private:
  EnvSpec spec_;
  LearnerConfig config_;
  AgentInputLayout layout_;
  AgentNet agent_;
  Mixer mixer_;
  ParameterSet params_;
  ParameterSet target_;
  RmsProp optimizer_;
};

AgentInputLayout MakeInputLayout(const EnvSpec& spec, bool last_action_input);

// Rolls out one episode. Epsilon follows 'schedule' at global step
// 'step_offset' + t.
Episode CollectEpisode(MultiAgentEnv& env, DecentralisedPolicy& policy,
                       std::uint64_t env_seed, const EpsilonSchedule& schedule,
                       std::int64_t step_offset, Rng& rng);

// Greedy rollout.
Episode GreedyEpisode(MultiAgentEnv& env, DecentralisedPolicy& policy,
                      std::uint64_t env_seed);

// One JSON object per line: episode, env_steps, loss, grad_norm, epsilon.
void WriteTrainRecord(std::ostream& out, std::int64_t episode,
                      std::int64_t env_steps, const TrainMetrics& metrics,
                      double epsilon);

}  // namespace monomix

#endif  // MONOMIX_LEARNER_H_
