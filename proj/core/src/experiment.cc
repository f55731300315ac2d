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
#include "monomix/experiment.h"

#include <cstdio>
#include <sstream>
#include <utility>

#include "monomix/agents.h"
#include "monomix/errors.h"
#include "monomix/learner.h"
#include "monomix/micro_combat.h"
#include "monomix/random.h"
#include "monomix/replay_buffer.h"
#include "monomix/scenario.h"
#include "monomix/two_step_game.h"

namespace monomix {
namespace {

std::string MetricName(const ExperimentConfig& c) {
  if (c.heuristic()) return "heuristic_win_rate";
  return c.env == EnvKind::kTwoStep ? "test_return" : "test_win_rate";
}

void Summarise(const ExperimentConfig& c, EvalPoint& p) {
  double total = 0.0;
  if (c.env == EnvKind::kTwoStep) {
    for (double r : p.returns) total += r;
  } else {
    for (auto w : p.wins) total += w;
  }
  p.value = total / static_cast<double>(p.returns.size());
}

void Record(EvalPoint& p, const Episode& ep) {
  p.returns.push_back(ep.Return());
  p.wins.push_back(ep.won ? 1 : 0);
}

}  // namespace

double EvalReport::final_value() const {
  if (points.empty()) throw ContractError("empty evaluation report");
  return points.back().value;
}

std::unique_ptr<MultiAgentEnv> MakeEnv(const ExperimentConfig& config) {
  if (config.env == EnvKind::kTwoStep) {
    return std::make_unique<TwoStepGame>(config.gamma);
  }
  return std::make_unique<MicroCombatEnv>(ResolveScenario(config.scenario),
                                          config.gamma);
}

std::uint64_t EvalEpisodeSeed(std::uint64_t eval_seed, std::int64_t round,
                              int i) {
  return DeriveSeed(DeriveSeed(eval_seed, static_cast<std::uint64_t>(round)),
                    static_cast<std::uint64_t>(i));
}

EvalPoint EvaluateParams(const ExperimentConfig& config,
                         const ParameterSet& params, int n_episodes,
                         std::uint64_t eval_seed,
                         std::vector<Episode>* episodes) {
  if (n_episodes < 1) throw ContractError("evaluation needs >= 1 episode");
  auto env = MakeEnv(config);
  const Learner shape(env->spec(), config.ToLearnerConfig(), 0);
  DecentralisedPolicy policy(shape.agent(), params, shape.layout());
  EvalPoint p;
  for (int i = 0; i < n_episodes; ++i) {
    Episode ep = GreedyEpisode(*env, policy, EvalEpisodeSeed(eval_seed, 0, i));
    Record(p, ep);
    if (episodes != nullptr) episodes->push_back(std::move(ep));
  }
  Summarise(config, p);
  return p;
}

EvalPoint EvaluateHeuristic(const ExperimentConfig& config, int n_episodes,
                            std::uint64_t eval_seed,
                            std::vector<Episode>* episodes) {
  if (config.env != EnvKind::kMicroCombat) {
    throw ConfigError("the heuristic baseline needs env micro_combat");
  }
  if (n_episodes < 1) throw ContractError("evaluation needs >= 1 episode");
  MicroCombatEnv env(ResolveScenario(config.scenario), config.gamma);
  EvalPoint p;
  for (int i = 0; i < n_episodes; ++i) {
    env.Reset(EvalEpisodeSeed(eval_seed, 0, i));
    EpisodeBuilder builder(env);
    while (!env.done()) {
      const std::vector<int> actions = env.HeuristicActions();
      const StepResult r = env.Step(actions);
      builder.AddStep(actions, r, env);
    }
    Episode ep = std::move(builder).Finish();
    Record(p, ep);
    if (episodes != nullptr) episodes->push_back(std::move(ep));
  }
  Summarise(config, p);
  return p;
}

RunResult RunExperiment(const ExperimentConfig& config, const RunHooks& hooks) {
  config.Validate();
  RunResult result;
  result.report.metric_name = MetricName(config);
  const std::uint64_t eval_base = DeriveSeed(config.seed, kEvalStream);
  if (config.heuristic()) {
    EvalPoint p = EvaluateHeuristic(config, config.eval_episodes, eval_base,
                                    &result.final_eval_episodes);
    if (hooks.on_eval) hooks.on_eval(p);
    result.report.points.push_back(std::move(p));
    return result;
  }

  auto env = MakeEnv(config);
  const EnvSpec& spec = env->spec();
  Learner learner(spec, config.ToLearnerConfig(),
                  DeriveSeed(config.seed, kLearnerStream));
  ReplayBuffer buffer(config.buffer_size, spec.episode_limit);
  Rng act_rng(DeriveSeed(config.seed, kActionStream));
  Rng sample_rng(DeriveSeed(config.seed, kSampleStream));
  const std::uint64_t env_base = DeriveSeed(config.seed, kTrainEnvStream);
  const EpsilonSchedule schedule = config.Schedule();
  DecentralisedPolicy policy = learner.MakePolicy();

  std::int64_t episode = 0;
  std::int64_t steps = 0;
  std::int64_t round = 0;
  auto evaluate = [&](bool final_round) {
    auto eval_env = MakeEnv(config);
    DecentralisedPolicy greedy = learner.MakePolicy();
    EvalPoint p;
    p.episode = episode;
    p.env_steps = steps;
    for (int i = 0; i < config.eval_episodes; ++i) {
      Episode ep =
          GreedyEpisode(*eval_env, greedy, EvalEpisodeSeed(eval_base, round, i));
      Record(p, ep);
      if (final_round) result.final_eval_episodes.push_back(std::move(ep));
    }
    ++round;
    Summarise(config, p);
    if (hooks.on_eval) hooks.on_eval(p);
    result.report.points.push_back(std::move(p));
  };

  evaluate(steps >= config.total_env_steps);
  while (steps < config.total_env_steps) {
    Episode ep = CollectEpisode(*env, policy,
                                DeriveSeed(env_base, static_cast<std::uint64_t>(episode)),
                                schedule, steps, act_rng);
    steps += ep.length;
    ++episode;
    buffer.Store(std::move(ep));
    if (buffer.size() >= config.batch_size) {
      for (int k = 0; k < config.train_steps_per_episode; ++k) {
        const EpisodeBatch batch =
            MakeBatch(buffer.Sample(config.batch_size, sample_rng));
        const TrainMetrics m = learner.Train(batch);
        if (hooks.train_log != nullptr) {
          WriteTrainRecord(*hooks.train_log, episode, steps, m, schedule(steps));
        }
      }
    }
    learner.MaybeSyncTarget(episode);
    const bool last = steps >= config.total_env_steps;
    if (episode % config.eval_interval_episodes == 0 || last) evaluate(last);
  }
  result.params = learner.params();
  result.episodes = episode;
  result.env_steps = steps;
  return result;
}

QtotTables ComputeQtotTables(const ExperimentConfig& config,
                             const ParameterSet& params) {
  if (config.env != EnvKind::kTwoStep) {
    throw ConfigError("Q_tot tables are defined for env two_step only");
  }
  if (config.heuristic()) throw ConfigError("heuristic runs have no Q values");
  TwoStepGame game(config.gamma);
  const Learner shape(game.spec(), config.ToLearnerConfig(), 0);
  const Mixer& mixer = shape.mixer();
  const bool joint = IsMonotoneMixer(mixer.kind());
  DecentralisedPolicy policy(shape.agent(), params, shape.layout());
  const std::vector<ActionMask> all(2, ActionMask{1, 1});
  Rng unused(0);

  QtotTables tables;
  auto table_for = [&](DecentralisedPolicy& pol, TwoStepGame::Phase phase) {
    const std::vector<double> obs = TwoStepGame::EncodePhase(phase);
    const Tensor q = pol.QValues({obs, obs});
    std::vector<std::vector<double>> per_agent(2, std::vector<double>(2));
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t u = 0; u < 2; ++u) per_agent[a][u] = q.at(a, u);
    }
    tables.agent_q.push_back(per_agent);
    if (!joint) return;
    std::vector<std::vector<double>> m(2, std::vector<double>(2));
    for (std::size_t u1 = 0; u1 < 2; ++u1) {
      for (std::size_t u2 = 0; u2 < 2; ++u2) {
        const std::vector<double> chosen = {per_agent[0][u1], per_agent[1][u2]};
        m[u1][u2] = mixer.Evaluate(params, chosen, obs);
      }
    }
    tables.q_tot.push_back(m);
  };

  // State 1 from a fresh history; the second-step tables follow the greedy
  // first step so recurrent agents see a consistent history.
  policy.Reset();
  table_for(policy, TwoStepGame::Phase::kState1);
  policy.Reset();
  const std::vector<double> s1 =
      TwoStepGame::EncodePhase(TwoStepGame::Phase::kState1);
  policy.Act({s1, s1}, all, 0.0, unused);
  for (TwoStepGame::Phase phase :
       {TwoStepGame::Phase::kState2A, TwoStepGame::Phase::kState2B}) {
    DecentralisedPolicy branch = policy;
    table_for(branch, phase);
  }
  return tables;
}

std::string FormatQtotTables(const QtotTables& tables) {
  const char* names[] = {"State 1", "State 2A", "State 2B"};
  std::ostringstream out;
  char buf[64];
  for (std::size_t k = 0; k < 3; ++k) {
    out << names[k] << '\n';
    if (!tables.q_tot.empty()) {
      out << "        A       B\n";
      for (std::size_t u1 = 0; u1 < 2; ++u1) {
        std::snprintf(buf, sizeof(buf), "%c  %6.2f  %6.2f\n",
                      u1 == 0 ? 'A' : 'B', tables.q_tot[k][u1][0],
                      tables.q_tot[k][u1][1]);
        out << buf;
      }
    } else {
      out << "           A       B\n";
      for (std::size_t a = 0; a < 2; ++a) {
        std::snprintf(buf, sizeof(buf), "agent %zu  %6.2f  %6.2f\n", a + 1,
                      tables.agent_q[k][a][0], tables.agent_q[k][a][1]);
        out << buf;
      }
    }
  }
  return out.str();
}

}  // namespace monomix
