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
#ifndef MONOMIX_EXPERIMENT_H_
#define MONOMIX_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "monomix/config.h"
#include "monomix/env.h"
#include "monomix/episode.h"
#include "monomix/parameters.h"

namespace monomix {

// Seed streams derived from the experiment seed.
inline constexpr std::uint64_t kLearnerStream = 11;
inline constexpr std::uint64_t kActionStream = 12;
inline constexpr std::uint64_t kSampleStream = 13;
inline constexpr std::uint64_t kTrainEnvStream = 14;
inline constexpr std::uint64_t kEvalStream = 15;

struct EvalPoint {
  std::int64_t episode = 0;
  std::int64_t env_steps = 0;
  double value = 0.0;  // mean greedy return or win rate
  std::vector<double> returns;
  std::vector<std::uint8_t> wins;
};

struct EvalReport {
  // "test_return" (two-step), "test_win_rate" (micro-combat) or
  // "heuristic_win_rate" (scripted baseline).
  std::string metric_name;
  std::vector<EvalPoint> points;

  double final_value() const;
};

struct RunResult {
  EvalReport report;
  ParameterSet params;  // empty for the heuristic baseline
  std::vector<Episode> final_eval_episodes;
  std::int64_t episodes = 0;
  std::int64_t env_steps = 0;
};

struct RunHooks {
  std::ostream* train_log = nullptr;  // train records as JSON lines
  std::function<void(const EvalPoint&)> on_eval;
};

std::unique_ptr<MultiAgentEnv> MakeEnv(const ExperimentConfig& config);

// Deterministic in the config (including its seed).
RunResult RunExperiment(const ExperimentConfig& config,
                        const RunHooks& hooks = {});

// Greedy rollouts of the decentralised policy in 'params' on env seeds
// derived from 'eval_seed'. Never modifies 'params'.
EvalPoint EvaluateParams(const ExperimentConfig& config,
                         const ParameterSet& params, int n_episodes,
                         std::uint64_t eval_seed,
                         std::vector<Episode>* episodes = nullptr);

// Scripted allied baseline on the same seed derivation.
EvalPoint EvaluateHeuristic(const ExperimentConfig& config, int n_episodes,
                            std::uint64_t eval_seed,
                            std::vector<Episode>* episodes = nullptr);

// Seed of evaluation round 'round', episode 'i'.
std::uint64_t EvalEpisodeSeed(std::uint64_t eval_seed, std::int64_t round,
                              int i);

// Two-step game tables.
struct QtotTables {
  // [phase][a1][a2] for State 1, State 2A, State 2B. For independent
  // learners 'agent_q' holds [phase][agent][action] and q_tot is empty.
  std::vector<std::vector<std::vector<double>>> q_tot;
  std::vector<std::vector<std::vector<double>>> agent_q;
};

QtotTables ComputeQtotTables(const ExperimentConfig& config,
                             const ParameterSet& params);
std::string FormatQtotTables(const QtotTables& tables);

}  // namespace monomix

#endif  // MONOMIX_EXPERIMENT_H_
