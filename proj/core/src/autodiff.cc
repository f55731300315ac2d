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
#include "monomix/autodiff.h"

#include <algorithm>
#include <string>

#include "monomix/errors.h"

namespace monomix {

const Tensor& Var::value() const {
  if (tape_ == nullptr) throw ContractError("use of an unbound Var");
  return tape_->value(id_);
}

Tensor Var::grad() const {
  if (tape_ == nullptr) throw ContractError("use of an unbound Var");
  Tensor g(value().shape());
  if (tape_->has_grad(id_)) {
    auto src = tape_->grad(id_);
    std::copy(src.begin(), src.end(), g.data().begin());
  }
  return g;
}

Var Tape::Push(Tensor value, bool requires_grad, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad && mode_ == Mode::kTrain;
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::Constant(Tensor value) {
  return Push(std::move(value), false, nullptr);
}

Var Tape::Variable(Tensor value) {
  return Push(std::move(value), true, nullptr);
}

Var Tape::Parameter(const ParameterSet& params, std::size_t index) {
  const auto key = std::make_pair(&params, index);
  if (auto it = parameter_nodes_.find(key); it != parameter_nodes_.end()) {
    return Var(this, it->second);
  }
  Var v = Push(params.value(index), true, nullptr);
  parameter_nodes_.emplace(key, v.id());
  return v;
}

Var Tape::Parameter(const ParameterSet& params, std::string_view name) {
  return Parameter(params, params.IndexOf(name));
}

void Tape::CheckOwned(const Var& v) const {
  if (v.tape() != this) {
    throw ContractError(v.tape() == nullptr
                            ? "unbound Var passed to an operation"
                            : "operands recorded on different tapes");
  }
}

Var Tape::Record(Tensor value, std::initializer_list<Var> parents,
                 BackwardFn backward) {
  bool needs = false;
  for (const Var& p : parents) {
    CheckOwned(p);
    needs = needs || nodes_[p.id()].requires_grad;
  }
  return Push(std::move(value), needs, std::move(backward));
}

Var Tape::Record(Tensor value, const std::vector<Var>& parents,
                 BackwardFn backward) {
  bool needs = false;
  for (const Var& p : parents) {
    CheckOwned(p);
    needs = needs || nodes_[p.id()].requires_grad;
  }
  return Push(std::move(value), needs, std::move(backward));
}

std::span<double> Tape::MutableGrad(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad.assign(n.value.size(), 0.0);
  return n.grad;
}

void Tape::Backward(Var loss) {
  CheckOwned(loss);
  if (loss.value().size() != 1) {
    throw ContractError("Backward() needs a scalar loss, got shape " +
                        loss.value().shape_string());
  }
  if (swept_) throw ContractError("tape already swept by Backward()");
  swept_ = true;
  if (!nodes_[loss.id()].requires_grad) return;
  MutableGrad(loss.id())[0] = 1.0;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.backward && !n.grad.empty()) n.backward(*this, i);
  }
}

Gradients Tape::GradientsFor(const ParameterSet& params) const {
  Gradients out;
  out.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor g(params.value(i).shape());
    auto it = parameter_nodes_.find(std::make_pair(&params, i));
    if (it != parameter_nodes_.end() && has_grad(it->second)) {
      auto src = grad(it->second);
      std::copy(src.begin(), src.end(), g.data().begin());
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace monomix
