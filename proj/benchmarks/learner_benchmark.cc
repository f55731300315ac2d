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
#include <benchmark/benchmark.h>

#include <vector>

#include "monomix/config.h"
#include "monomix/experiment.h"
#include "monomix/learner.h"
#include "monomix/micro_combat.h"
#include "monomix/two_step_game.h"

namespace monomix {
namespace {

std::vector<Episode> RandomEpisodes(MultiAgentEnv& env, Learner& learner,
                                    int count) {
  DecentralisedPolicy policy = learner.MakePolicy();
  Rng rng(3);
  EpsilonSchedule explore{1.0, 1.0, 0};
  std::vector<Episode> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(CollectEpisode(env, policy, static_cast<std::uint64_t>(i),
                                 explore, 0, rng));
  }
  return out;
}

void TrainBenchmark(benchmark::State& state, EnvKind kind) {
  ExperimentConfig c = DefaultConfig(kind);
  c.env = kind;
  c.algorithm = MixerKindName(static_cast<MixerKind>(state.range(0))).data();
  auto env = MakeEnv(c);
  Learner learner(env->spec(), c.ToLearnerConfig(), 1);
  const std::vector<Episode> episodes = RandomEpisodes(*env, learner, 32);
  std::vector<const Episode*> ptrs;
  for (const Episode& e : episodes) ptrs.push_back(&e);
  const EpisodeBatch batch = MakeBatch(ptrs);
  for (auto _ : state) benchmark::DoNotOptimize(learner.Train(batch));
  state.counters["T"] = batch.max_length;
  state.SetLabel(c.algorithm);
}

void BM_TrainStepTwoStep(benchmark::State& state) {
  TrainBenchmark(state, EnvKind::kTwoStep);
}
BENCHMARK(BM_TrainStepTwoStep)
    ->Arg(static_cast<int>(MixerKind::kNone))
    ->Arg(static_cast<int>(MixerKind::kVdn))
    ->Arg(static_cast<int>(MixerKind::kQmix));

void BM_TrainStepMicroCombat(benchmark::State& state) {
  TrainBenchmark(state, EnvKind::kMicroCombat);
}
BENCHMARK(BM_TrainStepMicroCombat)
    ->Arg(static_cast<int>(MixerKind::kNone))
    ->Arg(static_cast<int>(MixerKind::kVdn))
    ->Arg(static_cast<int>(MixerKind::kQmix))
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace monomix
