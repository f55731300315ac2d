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
#include "monomix/rmsprop.h"

#include <cmath>
#include <string>

#include "monomix/errors.h"

namespace monomix {

RmsProp::RmsProp(RmsPropOptions options, const ParameterSet& params)
    : options_(options) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    names_.push_back(params.name(i));
    accumulators_.emplace_back(params.value(i).shape());
  }
}

void RmsProp::Step(ParameterSet& params, const Gradients& grads) {
  if (params.size() != accumulators_.size() || grads.size() != params.size()) {
    throw ContractError("RmsProp::Step: parameter/gradient count mismatch");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params.name(i) != names_[i] ||
        !params.value(i).SameShape(grads[i])) {
      throw ContractError("RmsProp::Step: parameter " + params.name(i) +
                          " does not match optimizer state");
    }
    for (double g : grads[i].data()) {
      if (!std::isfinite(g)) {
        throw DivergenceError("non-finite gradient in parameter " +
                              params.name(i) + " at optimizer step " +
                              std::to_string(steps_));
      }
    }
  }
  const double a = options_.alpha;
  const double lr = options_.learning_rate;
  const double eps = options_.epsilon;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params.mutable_value(i).data();
    auto acc = accumulators_[i].data();
    auto g = grads[i].data();
    for (std::size_t k = 0; k < p.size(); ++k) {
      acc[k] = a * acc[k] + (1.0 - a) * g[k] * g[k];
      p[k] -= lr * g[k] / (std::sqrt(acc[k]) + eps);
    }
  }
  ++steps_;
}

}  // namespace monomix
