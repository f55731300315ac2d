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

#include "monomix/autodiff.h"
#include "monomix/ops.h"
#include "monomix/parameters.h"
#include "monomix/random.h"

namespace monomix {
namespace {

Tensor RandomTensor(Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = UniformReal(rng, -1.0, 1.0);
  return t;
}

void BM_LinearForwardBackward(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto width = static_cast<std::size_t>(state.range(1));
  Rng rng(1);
  ParameterSet params;
  params.Add("w", RandomTensor({width, width}, rng));
  params.Add("b", RandomTensor({width}, rng));
  const Tensor x = RandomTensor({rows, width}, rng);
  for (auto _ : state) {
    Tape tape;
    Var y = Linear(tape.Variable(x), tape.Parameter(params, 0),
                   tape.Parameter(params, 1));
    Var loss = Sum(y);
    tape.Backward(loss);
    benchmark::DoNotOptimize(tape.GradientsFor(params));
  }
  state.counters["flops"] = benchmark::Counter(
      6.0 * static_cast<double>(rows * width * width),
      benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_LinearForwardBackward)->Args({96, 64})->Args({1024, 64});

void BM_GruStep(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t kH = 64;
  Rng rng(2);
  ParameterSet params;
  for (const char* n : {"w_iz", "w_ir", "w_in", "w_hz", "w_hr", "w_hn"}) {
    params.Add(n, RandomTensor({kH, kH}, rng));
  }
  for (const char* n : {"b_iz", "b_ir", "b_in", "b_hz", "b_hr", "b_hn"}) {
    params.Add(n, RandomTensor({kH}, rng));
  }
  const Tensor x = RandomTensor({rows, kH}, rng);
  const Tensor h = RandomTensor({rows, kH}, rng);
  const bool backward = state.range(1) != 0;
  for (auto _ : state) {
    Tape tape(backward ? Tape::Mode::kTrain : Tape::Mode::kInference);
    auto p = [&](std::size_t i) { return tape.Parameter(params, i); };
    GruWeights w{p(0), p(1), p(2), p(3), p(4), p(5),
                 p(6), p(7), p(8), p(9), p(10), p(11)};
    Var out = GruCell(tape.Constant(x), tape.Constant(h), w);
    if (backward) {
      tape.Backward(Sum(out));
      benchmark::DoNotOptimize(tape.GradientsFor(params));
    } else {
      benchmark::DoNotOptimize(out.value());
    }
  }
}
BENCHMARK(BM_GruStep)->Args({3, 0})->Args({96, 0})->Args({96, 1});

}  // namespace
}  // namespace monomix
