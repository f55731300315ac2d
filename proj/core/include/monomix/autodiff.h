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
#ifndef MONOMIX_AUTODIFF_H_
#define MONOMIX_AUTODIFF_H_

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "monomix/parameters.h"
#include "monomix/tensor.h"

namespace monomix {

class Tape;

// Handle to a node on a Tape. Cheap to copy; only valid while its Tape lives.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  // Gradient of the loss with respect to this node. Zero-filled when the node
  // was not reached by Backward().
  Tensor grad() const;
  double item() const { return value().item(); }
  const Shape& shape() const { return value().shape(); }

  std::size_t id() const { return id_; }
  Tape* tape() const { return tape_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Append-only record of one forward computation, consumed by a single
// reverse sweep.
//
// In kInference mode nothing is recorded for the backward pass and every
// node is treated as a constant.
class Tape {
 public:
  enum class Mode { kTrain, kInference };

  // Propagates the gradient of node 'self' into its parents.
  using BackwardFn = std::function<void(Tape& tape, std::size_t self)>;

  explicit Tape(Mode mode = Mode::kTrain) : mode_(mode) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Mode mode() const { return mode_; }
  std::size_t size() const { return nodes_.size(); }

  Var Constant(Tensor value);
  // Free leaf that receives a gradient (used by tests and fitting routines).
  Var Variable(Tensor value);
  // Leaf bound to one entry of a ParameterSet. Repeated calls for the same
  // entry return the same node, so gradients accumulate in one place.
  Var Parameter(const ParameterSet& params, std::size_t index);
  Var Parameter(const ParameterSet& params, std::string_view name);

  // Appends an interior node. 'backward' is dropped when no parent requires a
  // gradient or the tape is in inference mode.
  Var Record(Tensor value, std::initializer_list<Var> parents,
             BackwardFn backward);
  Var Record(Tensor value, const std::vector<Var>& parents,
             BackwardFn backward);

  // Seeds d(loss)/d(loss) = 1 and sweeps the tape once in reverse. The loss
  // must hold exactly one element. A tape can be swept only once.
  void Backward(Var loss);

  // Gradients for every entry of 'params'; entries never bound to this tape,
  // or not reached by the sweep, get zeros.
  Gradients GradientsFor(const ParameterSet& params) const;

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const {
    return nodes_[id].requires_grad;
  }
  bool has_grad(std::size_t id) const { return !nodes_[id].grad.empty(); }
  // Gradient buffer of node 'id', allocated (zero) on first access.
  std::span<double> MutableGrad(std::size_t id);
  std::span<const double> grad(std::size_t id) const {
    return nodes_[id].grad;
  }

  // Throws ContractError unless 'v' belongs to this tape.
  void CheckOwned(const Var& v) const;

 private:
  struct Node {
    Tensor value;
    AlignedBuffer grad;
    BackwardFn backward;
    bool requires_grad = false;
  };

  Var Push(Tensor value, bool requires_grad, BackwardFn backward);

  Mode mode_;
  bool swept_ = false;
  std::vector<Node> nodes_;
  std::map<std::pair<const ParameterSet*, std::size_t>, std::size_t>
      parameter_nodes_;
};

}  // namespace monomix

#endif  // MONOMIX_AUTODIFF_H_
