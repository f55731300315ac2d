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
#include "monomix/learner.h"

#include <cmath>
#include <ostream>
#include <string>
#include <utility>

#include "json.hpp"
#include "monomix/errors.h"
#include "monomix/ops.h"

namespace monomix {
namespace {

constexpr std::uint64_t kInitStream = 1;

ParameterSet BuildParameters(const AgentNet& agent, const Mixer& mixer,
                             std::uint64_t seed) {
  Rng rng(DeriveSeed(seed, kInitStream));
  ParameterSet params;
  agent.AddParameters(params, rng);
  mixer.AddParameters(params, rng);
  return params;
}

AgentNetConfig AgentConfigFor(const EnvSpec& spec, const LearnerConfig& c) {
  AgentNetConfig a;
  a.input_dim = MakeInputLayout(spec, c.last_action_input).dim();
  a.hidden_dim = c.agent_hidden;
  a.n_actions = spec.n_actions;
  a.recurrent = c.recurrent;
  return a;
}

MixerConfig MixerConfigFor(const EnvSpec& spec, const LearnerConfig& c) {
  MixerConfig m;
  m.kind = c.mixer;
  m.n_agents = spec.n_agents;
  m.state_dim = spec.state_dim;
  m.mixing_hidden = c.mixing_hidden;
  m.hypernet_hidden = c.hypernet_hidden;
  return m;
}

// Agent network inputs of every (b, a) pair at time t: [(B*n) x dim].
Tensor StepInputs(const EpisodeBatch& batch, const AgentInputLayout& layout,
                  int t) {
  const EnvSpec& s = batch.spec;
  const auto n = static_cast<std::size_t>(s.n_agents);
  const auto bsz = static_cast<std::size_t>(batch.batch_size);
  const auto dim = static_cast<std::size_t>(layout.dim());
  const auto od = static_cast<std::size_t>(s.obs_dim);
  Tensor inputs({bsz * n, dim});
  for (std::size_t b = 0; b < bsz; ++b) {
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t row = b * n + a;
      const std::size_t obs_off =
          (batch.step_index(t, static_cast<int>(b)) * n + a) * od;
      const int prev =
          t == 0 ? -1
                 : batch.actions[batch.step_index(t - 1, static_cast<int>(b)) *
                                     n +
                                 a];
      layout.Fill(std::span<const double>(batch.obs).subspan(obs_off, od),
                  prev, static_cast<int>(a),
                  inputs.data().subspan(row * dim, dim));
    }
  }
  return inputs;
}

Tensor StateRows(const EpisodeBatch& batch, int t_begin, int t_end) {
  const auto sd = static_cast<std::size_t>(batch.spec.state_dim);
  const auto rows = static_cast<std::size_t>(t_end - t_begin) *
                    static_cast<std::size_t>(batch.batch_size);
  const auto begin = batch.state.begin() +
                     static_cast<std::ptrdiff_t>(
                         batch.step_index(t_begin, 0) * sd);
  return Tensor({rows, sd},
                std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(
                                                       rows * sd)));
}

std::vector<int> StepActions(const EpisodeBatch& batch, int t) {
  const auto n = static_cast<std::size_t>(batch.spec.n_agents);
  const auto begin = batch.actions.begin() +
                     static_cast<std::ptrdiff_t>(batch.step_index(t, 0) * n);
  return std::vector<int>(
      begin, begin + static_cast<std::ptrdiff_t>(
                         n * static_cast<std::size_t>(batch.batch_size)));
}

}  // namespace

double EpisodeBatch::FilledCount() const {
  double total = 0.0;
  for (double f : filled) total += f;
  return total;
}

EpisodeBatch MakeBatch(const std::vector<const Episode*>& episodes) {
  if (episodes.empty()) throw ContractError("cannot batch zero episodes");
  EpisodeBatch batch;
  batch.spec = episodes.front()->spec;
  batch.batch_size = static_cast<int>(episodes.size());
  for (const Episode* ep : episodes) {
    if (!(ep->spec == batch.spec)) {
      throw ContractError("episodes in a batch must share one EnvSpec");
    }
    batch.max_length = std::max(batch.max_length, ep->length);
  }
  const EnvSpec& s = batch.spec;
  const auto T = static_cast<std::size_t>(batch.max_length);
  const auto B = static_cast<std::size_t>(batch.batch_size);
  const auto n = static_cast<std::size_t>(s.n_agents);
  const auto od = static_cast<std::size_t>(s.obs_dim);
  const auto sd = static_cast<std::size_t>(s.state_dim);
  const auto u = static_cast<std::size_t>(s.n_actions);
  batch.obs.assign((T + 1) * B * n * od, 0.0);
  batch.state.assign((T + 1) * B * sd, 0.0);
  batch.avail.assign((T + 1) * B * n * u, 0);
  batch.actions.assign(T * B * n, 0);
  batch.rewards.assign(T * B, 0.0);
  batch.terminated.assign(T * B, 0.0);
  batch.filled.assign(T * B, 0.0);
  for (std::size_t b = 0; b < B; ++b) {
    const Episode& ep = *episodes[b];
    batch.lengths.push_back(ep.length);
    for (int t = 0; t <= ep.length; ++t) {
      const std::size_t k = batch.step_index(t, static_cast<int>(b));
      std::copy_n(ep.obs.begin() + static_cast<std::ptrdiff_t>(
                                       static_cast<std::size_t>(t) * n * od),
                  n * od,
                  batch.obs.begin() + static_cast<std::ptrdiff_t>(k * n * od));
      std::copy_n(ep.state.begin() + static_cast<std::ptrdiff_t>(
                                         static_cast<std::size_t>(t) * sd),
                  sd, batch.state.begin() + static_cast<std::ptrdiff_t>(k * sd));
      std::copy_n(ep.avail.begin() + static_cast<std::ptrdiff_t>(
                                         static_cast<std::size_t>(t) * n * u),
                  n * u,
                  batch.avail.begin() + static_cast<std::ptrdiff_t>(k * n * u));
      if (t == ep.length) break;
      std::copy_n(ep.actions.begin() + static_cast<std::ptrdiff_t>(
                                           static_cast<std::size_t>(t) * n),
                  n, batch.actions.begin() + static_cast<std::ptrdiff_t>(k * n));
      batch.rewards[k] = ep.rewards[static_cast<std::size_t>(t)];
      batch.terminated[k] = ep.terminated[static_cast<std::size_t>(t)];
      batch.filled[k] = 1.0;
    }
  }
  return batch;
}

AgentInputLayout MakeInputLayout(const EnvSpec& spec, bool last_action_input) {
  AgentInputLayout layout;
  layout.obs_dim = spec.obs_dim;
  layout.n_actions = spec.n_actions;
  layout.n_agents = spec.n_agents;
  layout.last_action = last_action_input;
  return layout;
}

std::vector<Var> UnrollAgents(Tape& tape, const EpisodeBatch& batch,
                              const AgentNet& agent,
                              const AgentInputLayout& layout,
                              const ParameterSet& params, int steps) {
  if (steps < 0 || steps > batch.max_length + 1) {
    throw ContractError("unroll length out of range");
  }
  std::vector<Var> out;
  out.reserve(static_cast<std::size_t>(steps));
  Var hidden = tape.Constant(
      agent.InitialHidden(batch.batch_size * batch.spec.n_agents));
  for (int t = 0; t < steps; ++t) {
    AgentNet::Output o = agent.Forward(
        tape, params, tape.Constant(StepInputs(batch, layout, t)), hidden);
    hidden = o.hidden;
    out.push_back(o.q);
  }
  return out;
}

std::vector<double> ComputeTargets(const EpisodeBatch& batch,
                                   const AgentNet& agent, const Mixer& mixer,
                                   const AgentInputLayout& layout,
                                   const ParameterSet& target_params,
                                   double gamma) {
  const int T = batch.max_length;
  const auto B = static_cast<std::size_t>(batch.batch_size);
  const auto n = static_cast<std::size_t>(batch.spec.n_agents);
  const auto u = static_cast<std::size_t>(batch.spec.n_actions);
  Tape tape(Tape::Mode::kInference);
  const std::vector<Var> q = UnrollAgents(tape, batch, agent, layout,
                                          target_params, T + 1);
  // Greedy next-step utilities per (t, b, a) for t = 0..T-1.
  std::vector<double> next(static_cast<std::size_t>(T) * B * n, 0.0);
  for (int t = 0; t < T; ++t) {
    const Tensor& qn = q[static_cast<std::size_t>(t + 1)].value();
    for (std::size_t b = 0; b < B; ++b) {
      for (std::size_t a = 0; a < n; ++a) {
        const std::size_t row = b * n + a;
        const auto values = qn.data().subspan(row * u, u);
        const auto mask = std::span<const std::uint8_t>(batch.avail).subspan(
            (batch.step_index(t + 1, static_cast<int>(b)) * n + a) * u, u);
        bool any = false;
        for (auto m : mask) any = any || m != 0;
        const int best = any ? MaskedArgmax(values, mask) : 0;
        next[(batch.step_index(t, static_cast<int>(b))) * n + a] =
            values[static_cast<std::size_t>(best)];
      }
    }
  }
  std::vector<double> y;
  if (!IsMonotoneMixer(mixer.kind())) {
    y.resize(next.size());
    for (int t = 0; t < T; ++t) {
      for (std::size_t b = 0; b < B; ++b) {
        const std::size_t k = batch.step_index(t, static_cast<int>(b));
        for (std::size_t a = 0; a < n; ++a) {
          y[k * n + a] = batch.rewards[k] + gamma * (1.0 - batch.terminated[k]) *
                                                next[k * n + a];
        }
      }
    }
    return y;
  }
  Var q_next = tape.Constant(
      Tensor({static_cast<std::size_t>(T) * B, n}, std::move(next)));
  Var s_next = tape.Constant(StateRows(batch, 1, T + 1));
  const Tensor& q_tot = mixer.Forward(tape, target_params, q_next, s_next).value();
  y.resize(static_cast<std::size_t>(T) * B);
  for (std::size_t k = 0; k < y.size(); ++k) {
    y[k] = batch.rewards[k] + gamma * (1.0 - batch.terminated[k]) * q_tot[k];
  }
  return y;
}

Var BuildLoss(Tape& tape, const EpisodeBatch& batch, const AgentNet& agent,
              const Mixer& mixer, const AgentInputLayout& layout,
              const ParameterSet& params, const std::vector<double>& targets) {
  const int T = batch.max_length;
  const auto B = static_cast<std::size_t>(batch.batch_size);
  const auto n = static_cast<std::size_t>(batch.spec.n_agents);
  const double filled = batch.FilledCount();
  if (filled <= 0.0) throw ContractError("batch has no filled steps");
  const std::vector<Var> q = UnrollAgents(tape, batch, agent, layout, params, T);
  std::vector<Var> chosen;
  chosen.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const std::vector<int> acts = StepActions(batch, t);
    chosen.push_back(GatherColumns(q[static_cast<std::size_t>(t)], acts));
  }
  const bool independent = !IsMonotoneMixer(mixer.kind());
  Var predicted;
  Tensor weights;
  if (independent) {
    predicted = ConcatRows(chosen);  // [(T*B*n) x 1]
    weights = Tensor({static_cast<std::size_t>(T) * B * n, 1});
    for (std::size_t k = 0; k < batch.filled.size(); ++k) {
      for (std::size_t a = 0; a < n; ++a) {
        weights[k * n + a] = batch.filled[k] / (filled * static_cast<double>(n));
      }
    }
  } else {
    for (Var& c : chosen) c = Reshape(c, {B, n});
    predicted = mixer.Forward(tape, params, ConcatRows(chosen),
                              tape.Constant(StateRows(batch, 0, T)));
    weights = Tensor({static_cast<std::size_t>(T) * B, 1});
    for (std::size_t k = 0; k < batch.filled.size(); ++k) {
      weights[k] = batch.filled[k] / filled;
    }
  }
  if (targets.size() != predicted.value().size()) {
    throw DimensionError("loss: " + std::to_string(targets.size()) +
                         " targets for " +
                         std::to_string(predicted.value().size()) +
                         " predictions");
  }
  Var y = tape.Constant(Tensor(predicted.shape(), targets));
  return WeightedSum(Square(Sub(predicted, y)), weights);
}

Learner::Learner(const EnvSpec& spec, LearnerConfig config,
                 std::uint64_t seed)
    : spec_(spec),
      config_(config),
      layout_(MakeInputLayout(spec, config.last_action_input)),
      agent_(AgentConfigFor(spec, config)),
      mixer_(MixerConfigFor(spec, config)),
      params_(BuildParameters(agent_, mixer_, seed)),
      target_(params_),
      optimizer_(config.optimizer, params_) {
  spec_.Validate();
  if (config_.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (config_.target_update_episodes < 1) {
    throw ConfigError("target_update_episodes must be >= 1");
  }
  if (config_.gamma < 0.0 || config_.gamma >= 1.0) {
    throw ConfigError("gamma must lie in [0, 1)");
  }
}

TrainMetrics Learner::Evaluate(const EpisodeBatch& batch,
                               Gradients* grads) const {
  const std::vector<double> y = ComputeTargets(batch, agent_, mixer_, layout_,
                                               target_, config_.gamma);
  Tape tape;
  Var loss = BuildLoss(tape, batch, agent_, mixer_, layout_, params_, y);
  TrainMetrics m;
  m.loss = loss.item();
  if (!std::isfinite(m.loss)) {
    throw DivergenceError("non-finite loss " + std::to_string(m.loss) +
                          " on a batch of " +
                          std::to_string(batch.batch_size) + " episodes, " +
                          std::to_string(batch.max_length) + " steps");
  }
  if (grads != nullptr) {
    tape.Backward(loss);
    *grads = tape.GradientsFor(params_);
    m.grad_norm = GlobalNorm(*grads);
    if (!std::isfinite(m.grad_norm)) {
      throw DivergenceError("non-finite gradient norm at loss " +
                            std::to_string(m.loss));
    }
  }
  return m;
}

TrainMetrics Learner::Train(const EpisodeBatch& batch) {
  if (!(batch.spec == spec_)) {
    throw ContractError("batch spec does not match the learner");
  }
  Gradients grads;
  TrainMetrics m = Evaluate(batch, &grads);
  optimizer_.Step(params_, grads);
  return m;
}

void Learner::SyncTarget() { AssignParameters(target_, params_); }

bool Learner::MaybeSyncTarget(std::int64_t episodes_seen) {
  if (episodes_seen > 0 && episodes_seen % config_.target_update_episodes == 0) {
    SyncTarget();
    return true;
  }
  return false;
}

Episode CollectEpisode(MultiAgentEnv& env, DecentralisedPolicy& policy,
                       std::uint64_t env_seed, const EpsilonSchedule& schedule,
                       std::int64_t step_offset, Rng& rng) {
  env.Reset(env_seed);
  policy.Reset();
  EpisodeBuilder builder(env);
  const EnvSpec& s = env.spec();
  std::vector<std::vector<double>> obs(static_cast<std::size_t>(s.n_agents));
  std::vector<ActionMask> masks(static_cast<std::size_t>(s.n_agents));
  while (!env.done()) {
    const Episode& ep = builder.partial();
    const int t = ep.length;
    for (int a = 0; a < s.n_agents; ++a) {
      const auto o = ep.obs_at(t, a);
      obs[static_cast<std::size_t>(a)].assign(o.begin(), o.end());
      const auto m = ep.avail_at(t, a);
      masks[static_cast<std::size_t>(a)].assign(m.begin(), m.end());
    }
    const double eps = schedule(step_offset + t);
    const std::vector<int> actions = policy.Act(obs, masks, eps, rng);
    const StepResult r = env.Step(actions);
    builder.AddStep(actions, r, env);
  }
  return std::move(builder).Finish();
}

Episode GreedyEpisode(MultiAgentEnv& env, DecentralisedPolicy& policy,
                      std::uint64_t env_seed) {
  Rng unused(0);
  EpsilonSchedule greedy{0.0, 0.0, 0};
  return CollectEpisode(env, policy, env_seed, greedy, 0, unused);
}

void WriteTrainRecord(std::ostream& out, std::int64_t episode,
                      std::int64_t env_steps, const TrainMetrics& metrics,
                      double epsilon) {
  nlohmann::json rec = {{"episode", episode},
                        {"env_steps", env_steps},
                        {"loss", metrics.loss},
                        {"grad_norm", metrics.grad_norm},
                        {"epsilon", epsilon}};
  out << rec.dump() << '\n';
}

}  // namespace monomix
