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
#ifndef MONOMIX_OPS_H_
#define MONOMIX_OPS_H_

#include <span>
#include <string_view>
#include <vector>

#include "monomix/autodiff.h"
#include "monomix/tensor.h"

namespace monomix {

enum class Activation { kRelu, kElu, kAbs, kSigmoid, kTanh };

std::string_view ActivationName(Activation kind);

// y = x * weight^T + bias. x is [in] or [N x in], weight is [out x in] and
// bias is [out]; the result has x's rank.
Var Linear(Var x, Var weight, Var bias);

// Elementwise; operands must have identical shapes.
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);

// Adds a length-m vector to every row of an [N x m] matrix.
Var AddBias(Var x, Var bias);

// scale * x + shift.
Var Affine(Var x, double scale, double shift);
Var Square(Var x);

// ELU uses unit scale on the negative branch; the derivative of abs at 0 is 0.
Var Activate(Var x, Activation kind);
inline Var Relu(Var x) { return Activate(x, Activation::kRelu); }
inline Var Elu(Var x) { return Activate(x, Activation::kElu); }
inline Var Abs(Var x) { return Activate(x, Activation::kAbs); }
inline Var Sigmoid(Var x) { return Activate(x, Activation::kSigmoid); }
inline Var Tanh(Var x) { return Activate(x, Activation::kTanh); }

// out[r] = x[r, index[r]]; x is [N x U], result [N x 1].
Var GatherColumns(Var x, std::span<const int> index);

Var Reshape(Var x, Shape shape);

// [N x m] -> [N x 1].
Var RowSum(Var x);
Var RowDot(Var a, Var b);

// Per-row vector-matrix product with the matrix stored flattened in the row:
// q is [N x n], w is [N x (n*H)], out[r, h] = sum_a q[r, a] * w[r, a*H + h].
Var BatchedVecMat(Var q, Var w);

// Stacks matrices with equal column counts.
Var ConcatRows(const std::vector<Var>& parts);

// sum_i x[i] * weights[i] as a scalar; weights are constants.
Var WeightedSum(Var x, const Tensor& weights);
Var Sum(Var x);

struct GruWeights {
  Var w_iz, w_ir, w_in;  // [H x in]
  Var w_hz, w_hr, w_hn;  // [H x H]
  Var b_iz, b_ir, b_in;  // [H]
  Var b_hz, b_hr, b_hn;  // [H]
};

// One GRU step with biases on every gate:
//   z  = sigmoid(W_iz x + b_iz + W_hz h + b_hz)
//   r  = sigmoid(W_ir x + b_ir + W_hr h + b_hr)
//   h~ = tanh(W_in x + b_in + r * (W_hn h + b_hn))
//   h' = (1 - z) * h + z * h~
Var GruCell(Var x, Var h, const GruWeights& w);

}  // namespace monomix

#endif  // MONOMIX_OPS_H_
