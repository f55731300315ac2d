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
#ifndef MONOMIX_TESTS_TEST_UTIL_H_
#define MONOMIX_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "monomix/autodiff.h"
#include "monomix/episode.h"
#include "monomix/parameters.h"
#include "monomix/random.h"
#include "monomix/tensor.h"

namespace monomix::testing {

inline Tensor RandomTensor(Shape shape, Rng& rng, double lo = -1.0,
                           double hi = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = UniformReal(rng, lo, hi);
  return t;
}

inline double RelativeError(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

// Largest relative error between the tape gradient of 'loss_fn' with respect
// to every entry of 'params' and a central finite difference.
inline double MaxGradientError(
    ParameterSet& params,
    const std::function<Var(Tape&, const ParameterSet&)>& loss_fn,
    double step = 1e-6) {
  Tape tape;
  Var loss = loss_fn(tape, params);
  tape.Backward(loss);
  const Gradients grads = tape.GradientsFor(params);
  auto eval = [&]() {
    Tape t(Tape::Mode::kInference);
    return loss_fn(t, params).item();
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& value = params.mutable_value(i);
    for (std::size_t k = 0; k < value.size(); ++k) {
      const double saved = value[k];
      value[k] = saved + step;
      const double up = eval();
      value[k] = saved - step;
      const double down = eval();
      value[k] = saved;
      worst = std::max(worst,
                       RelativeError(grads[i][k], (up - down) / (2.0 * step)));
    }
  }
  return worst;
}

// Central differences of a scalar function of one free tensor.
inline double MaxInputGradientError(
    Tensor input, const std::function<Var(Tape&, Var)>& fn,
    double step = 1e-6) {
  Tape tape;
  Var x = tape.Variable(input);
  Var y = fn(tape, x);
  tape.Backward(y);
  const Tensor g = x.grad();
  double worst = 0.0;
  for (std::size_t k = 0; k < input.size(); ++k) {
    const double saved = input[k];
    auto eval = [&](double v) {
      input[k] = v;
      Tape t(Tape::Mode::kInference);
      return fn(t, t.Constant(input)).item();
    };
    const double numeric =
        (eval(saved + step) - eval(saved - step)) / (2.0 * step);
    input[k] = saved;
    worst = std::max(worst, RelativeError(g[k], numeric));
  }
  return worst;
}


// Random episode of 'length' steps with at least one available action per
// agent, actions drawn from the available set and rewards in [-1, 1].
inline Episode SyntheticEpisode(const EnvSpec& spec, int length, Rng& rng,
                                bool terminated = true) {
  Episode ep;
  ep.spec = spec;
  ep.length = length;
  const auto steps = static_cast<std::size_t>(length + 1);
  const auto n = static_cast<std::size_t>(spec.n_agents);
  const auto u = static_cast<std::size_t>(spec.n_actions);
  ep.obs.resize(steps * n * static_cast<std::size_t>(spec.obs_dim));
  for (double& v : ep.obs) v = UniformReal(rng, -1.0, 1.0);
  ep.state.resize(steps * static_cast<std::size_t>(spec.state_dim));
  for (double& v : ep.state) v = UniformReal(rng, -1.0, 1.0);
  ep.avail.resize(steps * n * u);
  for (std::size_t k = 0; k < steps * n; ++k) {
    const int forced = UniformInt(rng, 0, spec.n_actions - 1);
    for (std::size_t j = 0; j < u; ++j) {
      ep.avail[k * u + j] =
          static_cast<int>(j) == forced || UniformReal(rng, 0, 1) < 0.6;
    }
  }
  for (int t = 0; t < length; ++t) {
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<int> ok;
      for (std::size_t j = 0; j < u; ++j) {
        if (ep.avail[(static_cast<std::size_t>(t) * n + a) * u + j]) {
          ok.push_back(static_cast<int>(j));
        }
      }
      ep.actions.push_back(ok[static_cast<std::size_t>(
          UniformInt(rng, 0, static_cast<int>(ok.size()) - 1))]);
    }
    ep.rewards.push_back(UniformReal(rng, -1.0, 1.0));
    ep.terminated.push_back(terminated && t + 1 == length ? 1 : 0);
  }
  ep.truncated = !terminated;
  return ep;
}

}  // namespace monomix::testing

#endif  // MONOMIX_TESTS_TEST_UTIL_H_
