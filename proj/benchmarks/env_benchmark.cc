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

#include <cstdint>

#include "monomix/micro_combat.h"
#include "monomix/runtime.h"
#include "monomix/scenario.h"

namespace monomix {
namespace {

void BM_HeuristicEpisode(benchmark::State& state) {
  const auto names = BuiltinScenarioNames();
  MicroCombatEnv env(BuiltinScenario(names[static_cast<std::size_t>(state.range(0))]));
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  for (auto _ : state) {
    env.Reset(seed++);
    while (!env.done()) {
      env.Step(env.HeuristicActions());
      benchmark::DoNotOptimize(env.State());
      for (int a = 0; a < env.spec().n_agents; ++a) {
        benchmark::DoNotOptimize(env.AgentObservation(a));
      }
      ++steps;
    }
  }
  state.counters["steps/s"] =
      benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
  state.SetLabel(names[static_cast<std::size_t>(state.range(0))]);
}
BENCHMARK(BM_HeuristicEpisode)->DenseRange(0, 5);

}  // namespace
}  // namespace monomix

int main(int argc, char** argv) {
  monomix::ConfigureAllocator();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
