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
#ifndef MONOMIX_RMSPROP_H_
#define MONOMIX_RMSPROP_H_

#include <vector>

#include "monomix/parameters.h"
#include "monomix/tensor.h"

namespace monomix {

struct RmsPropOptions {
  double learning_rate = 5e-4;
  double alpha = 0.99;
  double epsilon = 1e-5;
};

// RMSprop without momentum or weight decay:
//   acc <- alpha * acc + (1 - alpha) * g^2
//   p   <- p - lr * g / (sqrt(acc) + epsilon)
// One accumulator per parameter tensor, matched by position and name.
class RmsProp {
 public:
  RmsProp(RmsPropOptions options, const ParameterSet& params);

  // Throws DivergenceError (and leaves 'params' untouched) if any gradient
  // entry is not finite.
  void Step(ParameterSet& params, const Gradients& grads);

  const RmsPropOptions& options() const { return options_; }
  const Tensor& accumulator(std::size_t i) const { return accumulators_[i]; }
  std::size_t steps() const { return steps_; }

 private:
  RmsPropOptions options_;
  std::vector<std::string> names_;
  std::vector<Tensor> accumulators_;
  std::size_t steps_ = 0;
};

}  // namespace monomix

#endif  // MONOMIX_RMSPROP_H_
