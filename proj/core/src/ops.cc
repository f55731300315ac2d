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
#include "monomix/ops.h"

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "monomix/errors.h"

namespace monomix {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

ConstMap View(const Tensor& t) {
  return ConstMap(t.data().data(), static_cast<Eigen::Index>(t.rows()),
                  static_cast<Eigen::Index>(t.cols()));
}

ConstMap View(std::span<const double> data, std::size_t rows,
              std::size_t cols) {
  return ConstMap(data.data(), static_cast<Eigen::Index>(rows),
                  static_cast<Eigen::Index>(cols));
}

MutMap MutView(std::span<double> data, std::size_t rows, std::size_t cols) {
  return MutMap(data.data(), static_cast<Eigen::Index>(rows),
                static_cast<Eigen::Index>(cols));
}

[[noreturn]] void ShapeFail(std::string_view op, const Tensor& a,
                            const Tensor& b) {
  throw DimensionError(std::string(op) + ": incompatible shapes " +
                       a.shape_string() + " and " + b.shape_string());
}

void RequireSameShape(std::string_view op, const Var& a, const Var& b) {
  if (!a.value().SameShape(b.value())) ShapeFail(op, a.value(), b.value());
}

void RequireMatrix(std::string_view op, const Var& x) {
  if (x.value().rank() != 2) {
    throw DimensionError(std::string(op) + ": expected a matrix, got " +
                         x.value().shape_string());
  }
}

Tape& TapeOf(const Var& a) {
  if (!a.valid()) throw ContractError("unbound Var passed to an operation");
  return *a.tape();
}

}  // namespace

std::string_view ActivationName(Activation kind) {
  switch (kind) {
    case Activation::kRelu: return "relu";
    case Activation::kElu: return "elu";
    case Activation::kAbs: return "abs";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kTanh: return "tanh";
  }
  return "unknown";
}

Var Linear(Var x, Var weight, Var bias) {
  Tape& tape = TapeOf(x);
  const Tensor& xv = x.value();
  const Tensor& wv = weight.value();
  const Tensor& bv = bias.value();
  if (wv.rank() != 2 || xv.rank() == 0 || xv.cols() != wv.cols()) {
    ShapeFail("linear", xv, wv);
  }
  if (bv.rank() != 1 || bv.size() != wv.rows()) ShapeFail("linear", wv, bv);
  const std::size_t n = xv.rows();
  const std::size_t in = wv.cols();
  const std::size_t out = wv.rows();

  Tensor y(xv.rank() == 1 ? Shape{out} : Shape{n, out});
  MutMap ym = MutView(y.data(), n, out);
  ym.noalias() = View(xv) * View(wv).transpose();
  ym.rowwise() += View(bv).row(0);

  const std::size_t xi = x.id(), wi = weight.id(), bi = bias.id();
  return tape.Record(std::move(y), {x, weight, bias},
                     [=](Tape& t, std::size_t self) {
    ConstMap g = View(t.grad(self), n, out);
    if (t.requires_grad(xi)) {
      MutView(t.MutableGrad(xi), n, in).noalias() += g * View(t.value(wi));
    }
    if (t.requires_grad(wi)) {
      MutView(t.MutableGrad(wi), out, in).noalias() +=
          g.transpose() * View(t.value(xi));
    }
    if (t.requires_grad(bi)) {
      MutView(t.MutableGrad(bi), 1, out) += g.colwise().sum();
    }
  });
}

Var Add(Var a, Var b) {
  RequireSameShape("add", a, b);
  Tensor y = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += bv[i];
  const std::size_t ai = a.id(), bi = b.id();
  return TapeOf(a).Record(std::move(y), {a, b}, [=](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    for (std::size_t p : {ai, bi}) {
      if (!t.requires_grad(p)) continue;
      auto d = t.MutableGrad(p);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
    }
  });
}

Var Sub(Var a, Var b) {
  RequireSameShape("sub", a, b);
  Tensor y = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= bv[i];
  const std::size_t ai = a.id(), bi = b.id();
  return TapeOf(a).Record(std::move(y), {a, b}, [=](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    if (t.requires_grad(ai)) {
      auto d = t.MutableGrad(ai);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
    }
    if (t.requires_grad(bi)) {
      auto d = t.MutableGrad(bi);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] -= g[i];
    }
  });
}

Var Mul(Var a, Var b) {
  RequireSameShape("mul", a, b);
  Tensor y = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= bv[i];
  const std::size_t ai = a.id(), bi = b.id();
  return TapeOf(a).Record(std::move(y), {a, b}, [=](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    if (t.requires_grad(ai)) {
      auto d = t.MutableGrad(ai);
      const Tensor& other = t.value(bi);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * other[i];
    }
    if (t.requires_grad(bi)) {
      auto d = t.MutableGrad(bi);
      const Tensor& other = t.value(ai);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * other[i];
    }
  });
}

Var AddBias(Var x, Var bias) {
  const Tensor& xv = x.value();
  const Tensor& bv = bias.value();
  if (bv.rank() != 1 || bv.size() != xv.cols()) ShapeFail("add_bias", xv, bv);
  const std::size_t n = xv.rows(), m = xv.cols();
  Tensor y = xv;
  MutView(y.data(), n, m).rowwise() += View(bv).row(0);
  const std::size_t xi = x.id(), bi = bias.id();
  return TapeOf(x).Record(std::move(y), {x, bias},
                          [=](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    if (t.requires_grad(xi)) {
      auto d = t.MutableGrad(xi);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
    }
    if (t.requires_grad(bi)) {
      MutView(t.MutableGrad(bi), 1, m) += View(g, n, m).colwise().sum();
    }
  });
}

Var Affine(Var x, double scale, double shift) {
  Tensor y = x.value();
  for (double& v : y.data()) v = scale * v + shift;
  const std::size_t xi = x.id();
  return TapeOf(x).Record(std::move(y), {x}, [=](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    auto d = t.MutableGrad(xi);
    for (std::size_t i = 0; i < g.size(); ++i) d[i] += scale * g[i];
  });
}

Var Square(Var x) {
  Tensor y = x.value();
  for (double& v : y.data()) v = v * v;
  const std::size_t xi = x.id();
  return TapeOf(x).Record(std::move(y), {x}, [=](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    auto d = t.MutableGrad(xi);
    const Tensor& xv = t.value(xi);
    for (std::size_t i = 0; i < g.size(); ++i) d[i] += 2.0 * xv[i] * g[i];
  });
}

Var Activate(Var x, Activation kind) {
  Tensor y = x.value();
  switch (kind) {
    case Activation::kRelu:
      for (double& v : y.data()) v = v > 0.0 ? v : 0.0;
      break;
    case Activation::kElu:
      for (double& v : y.data()) v = v > 0.0 ? v : std::expm1(v);
      break;
    case Activation::kAbs:
      for (double& v : y.data()) v = std::fabs(v);
      break;
    case Activation::kSigmoid: {
      auto a = MutView(y.data(), 1, y.size()).array();
      a = (1.0 + (-a).exp()).inverse();
      break;
    }
    case Activation::kTanh: {
      // tanh(v) = 2 / (1 + exp(-2v)) - 1, clamped so exp cannot overflow.
      auto a = MutView(y.data(), 1, y.size()).array();
      a = 2.0 * (1.0 + (-2.0 * a.max(-350.0)).exp()).inverse() - 1.0;
      break;
    }
  }
  const std::size_t xi = x.id();
  return TapeOf(x).Record(std::move(y), {x}, [=](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    auto d = t.MutableGrad(xi);
    const Tensor& xv = t.value(xi);
    const Tensor& yv = t.value(s);
    for (std::size_t i = 0; i < g.size(); ++i) {
      double local = 0.0;
      switch (kind) {
        case Activation::kRelu: local = xv[i] > 0.0 ? 1.0 : 0.0; break;
        case Activation::kElu: local = xv[i] > 0.0 ? 1.0 : yv[i] + 1.0; break;
        case Activation::kAbs:
          local = xv[i] > 0.0 ? 1.0 : (xv[i] < 0.0 ? -1.0 : 0.0);
          break;
        case Activation::kSigmoid: local = yv[i] * (1.0 - yv[i]); break;
        case Activation::kTanh: local = 1.0 - yv[i] * yv[i]; break;
      }
      d[i] += local * g[i];
    }
  });
}

Var GatherColumns(Var x, std::span<const int> index) {
  RequireMatrix("gather_columns", x);
  const Tensor& xv = x.value();
  const std::size_t n = xv.rows(), u = xv.cols();
  if (index.size() != n) {
    throw DimensionError("gather_columns: " + std::to_string(index.size()) +
                         " indices for " + xv.shape_string());
  }
  std::vector<int> idx(index.begin(), index.end());
  Tensor y(Shape{n, 1});
  for (std::size_t r = 0; r < n; ++r) {
    if (idx[r] < 0 || static_cast<std::size_t>(idx[r]) >= u) {
      throw ContractError("gather_columns: index " + std::to_string(idx[r]) +
                          " out of range for " + xv.shape_string());
    }
    y[r] = xv.at(r, static_cast<std::size_t>(idx[r]));
  }
  const std::size_t xi = x.id();
  return TapeOf(x).Record(std::move(y), {x},
                          [=, idx = std::move(idx)](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    auto d = t.MutableGrad(xi);
    for (std::size_t r = 0; r < n; ++r) d[r * u + idx[r]] += g[r];
  });
}

Var Reshape(Var x, Shape shape) {
  Tensor y = x.value().Reshaped(std::move(shape));
  const std::size_t xi = x.id();
  return TapeOf(x).Record(std::move(y), {x}, [=](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    auto d = t.MutableGrad(xi);
    for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
  });
}

Var RowSum(Var x) {
  RequireMatrix("row_sum", x);
  const Tensor& xv = x.value();
  const std::size_t n = xv.rows(), m = xv.cols();
  Tensor y(Shape{n, 1});
  for (std::size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m; ++c) acc += xv.at(r, c);
    y[r] = acc;
  }
  const std::size_t xi = x.id();
  return TapeOf(x).Record(std::move(y), {x}, [=](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    auto d = t.MutableGrad(xi);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < m; ++c) d[r * m + c] += g[r];
    }
  });
}

Var RowDot(Var a, Var b) {
  RequireMatrix("row_dot", a);
  RequireSameShape("row_dot", a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const std::size_t n = av.rows(), m = av.cols();
  Tensor y(Shape{n, 1});
  for (std::size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m; ++c) acc += av.at(r, c) * bv.at(r, c);
    y[r] = acc;
  }
  const std::size_t ai = a.id(), bi = b.id();
  return TapeOf(a).Record(std::move(y), {a, b}, [=](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    if (t.requires_grad(ai)) {
      auto d = t.MutableGrad(ai);
      const Tensor& other = t.value(bi);
      for (std::size_t i = 0; i < n * m; ++i) d[i] += g[i / m] * other[i];
    }
    if (t.requires_grad(bi)) {
      auto d = t.MutableGrad(bi);
      const Tensor& other = t.value(ai);
      for (std::size_t i = 0; i < n * m; ++i) d[i] += g[i / m] * other[i];
    }
  });
}

Var BatchedVecMat(Var q, Var w) {
  RequireMatrix("batched_vec_mat", q);
  RequireMatrix("batched_vec_mat", w);
  const Tensor& qv = q.value();
  const Tensor& wv = w.value();
  const std::size_t n = qv.rows(), k = qv.cols();
  if (wv.rows() != n || k == 0 || wv.cols() % k != 0) {
    ShapeFail("batched_vec_mat", qv, wv);
  }
  const std::size_t h = wv.cols() / k;
  Tensor y(Shape{n, h});
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t a = 0; a < k; ++a) {
      const double qa = qv.at(r, a);
      const double* wrow = &wv.data()[r * k * h + a * h];
      double* yrow = &y.data()[r * h];
      for (std::size_t j = 0; j < h; ++j) yrow[j] += qa * wrow[j];
    }
  }
  const std::size_t qi = q.id(), wi = w.id();
  return TapeOf(q).Record(std::move(y), {q, w}, [=](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    const Tensor& qv = t.value(qi);
    const Tensor& wv = t.value(wi);
    if (t.requires_grad(qi)) {
      auto d = t.MutableGrad(qi);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t a = 0; a < k; ++a) {
          double acc = 0.0;
          for (std::size_t j = 0; j < h; ++j) {
            acc += g[r * h + j] * wv[r * k * h + a * h + j];
          }
          d[r * k + a] += acc;
        }
      }
    }
    if (t.requires_grad(wi)) {
      auto d = t.MutableGrad(wi);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t a = 0; a < k; ++a) {
          const double qa = qv[r * k + a];
          for (std::size_t j = 0; j < h; ++j) {
            d[r * k * h + a * h + j] += g[r * h + j] * qa;
          }
        }
      }
    }
  });
}

Var ConcatRows(const std::vector<Var>& parts) {
  if (parts.empty()) throw ContractError("concat_rows of nothing");
  const std::size_t m = parts.front().value().cols();
  std::size_t total = 0;
  for (const Var& p : parts) {
    RequireMatrix("concat_rows", p);
    if (p.value().cols() != m) {
      ShapeFail("concat_rows", parts.front().value(), p.value());
    }
    total += p.value().rows();
  }
  Tensor y(Shape{total, m});
  std::vector<std::size_t> ids;
  std::size_t offset = 0;
  for (const Var& p : parts) {
    const auto src = p.value().data();
    std::copy(src.begin(), src.end(), y.data().begin() + offset);
    offset += src.size();
    ids.push_back(p.id());
  }
  return TapeOf(parts.front())
      .Record(std::move(y), parts,
              [ids = std::move(ids)](Tape& t, std::size_t s) {
    auto g = t.grad(s);
    std::size_t off = 0;
    for (std::size_t id : ids) {
      const std::size_t len = t.value(id).size();
      if (t.requires_grad(id)) {
        auto d = t.MutableGrad(id);
        for (std::size_t i = 0; i < len; ++i) d[i] += g[off + i];
      }
      off += len;
    }
  });
}

Var WeightedSum(Var x, const Tensor& weights) {
  const Tensor& xv = x.value();
  if (weights.size() != xv.size()) ShapeFail("weighted_sum", xv, weights);
  double acc = 0.0;
  for (std::size_t i = 0; i < xv.size(); ++i) acc += xv[i] * weights[i];
  const std::size_t xi = x.id();
  return TapeOf(x).Record(Tensor::Scalar(acc), {x},
                          [=, w = weights](Tape& t, std::size_t s) {
    const double g = t.grad(s)[0];
    auto d = t.MutableGrad(xi);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += g * w[i];
  });
}

Var Sum(Var x) {
  return WeightedSum(x, Tensor::Filled(x.value().shape(), 1.0));
}

Var GruCell(Var x, Var h, const GruWeights& w) {
  Tape& tape = TapeOf(x);
  const Tensor& xv = x.value();
  const Tensor& hv = h.value();
  const Tensor& wiz = w.w_iz.value();
  const Tensor& whz = w.w_hz.value();
  if (xv.rank() != 2 || hv.rank() != 2 || xv.rows() != hv.rows() ||
      wiz.rank() != 2 || whz.rank() != 2 || wiz.cols() != xv.cols() ||
      whz.rows() != hv.cols() || whz.cols() != hv.cols() ||
      wiz.rows() != hv.cols()) {
    throw DimensionError("gru_cell: input " + xv.shape_string() +
                         " / hidden " + hv.shape_string() +
                         " do not match gate weights " + wiz.shape_string() +
                         ", " + whz.shape_string());
  }
  const std::array<Var, 12> all = {w.w_iz, w.w_ir, w.w_in, w.w_hz,
                                   w.w_hr, w.w_hn, w.b_iz, w.b_ir,
                                   w.b_in, w.b_hz, w.b_hr, w.b_hn};
  for (int k = 0; k < 12; ++k) {
    const Tensor& t = all[static_cast<std::size_t>(k)].value();
    const Tensor& ref = k < 3 ? wiz : (k < 6 ? whz : Tensor());
    if (k < 6 ? !t.SameShape(ref)
              : (t.rank() != 1 || t.size() != hv.cols())) {
      throw DimensionError("gru_cell: gate parameter " + std::to_string(k) +
                           " has shape " + t.shape_string());
    }
  }
  const std::size_t n = xv.rows(), in = xv.cols(), hd = hv.cols();

  // Pre-activation of gate k from input (i) and hidden (h) paths.
  auto affine = [&](const Var& input, const Var& weight, const Var& bias,
                    std::size_t width) {
    RowMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(hd));
    out.noalias() = View(input.value().data(), n, width) *
                    View(weight.value()).transpose();
    out.rowwise() += View(bias.value().data(), 1, hd).row(0);
    return out;
  };
  auto sigmoid = [](const RowMatrix& a) -> RowMatrix {
    return (1.0 + (-a.array()).exp()).inverse().matrix();
  };
  const RowMatrix z = sigmoid(affine(x, w.w_iz, w.b_iz, in) +
                              affine(h, w.w_hz, w.b_hz, hd));
  const RowMatrix r = sigmoid(affine(x, w.w_ir, w.b_ir, in) +
                              affine(h, w.w_hr, w.b_hr, hd));
  const RowMatrix hn = affine(h, w.w_hn, w.b_hn, hd);
  const RowMatrix pre_n =
      affine(x, w.w_in, w.b_in, in) + (r.array() * hn.array()).matrix();
  const RowMatrix cand =
      (2.0 * (1.0 + (-2.0 * pre_n.array().max(-350.0)).exp()).inverse() - 1.0)
          .matrix();

  Tensor y(Shape{n, hd});
  const ConstMap hm = View(hv);
  MutView(y.data(), n, hd) = hm + (z.array() * (cand - hm).array()).matrix();

  std::vector<Var> parents = {x, h};
  parents.insert(parents.end(), all.begin(), all.end());
  std::array<std::size_t, 12> ids;
  for (std::size_t k = 0; k < 12; ++k) ids[k] = all[k].id();
  const std::size_t xi = x.id(), hi = h.id();
  return tape.Record(
      std::move(y), parents,
      [=](Tape& t, std::size_t self) {
        const ConstMap g = View(t.grad(self), n, hd);
        const ConstMap hm = View(t.value(hi));
        const ConstMap xm = View(t.value(xi));
        // h' = h + z * (n - h)
        const RowMatrix d_cand = (g.array() * z.array()).matrix();
        const RowMatrix d_z = (g.array() * (cand - hm).array()).matrix();
        const RowMatrix da_n =
            (d_cand.array() * (1.0 - cand.array().square())).matrix();
        const RowMatrix d_hn = (da_n.array() * r.array()).matrix();
        const RowMatrix da_r = (da_n.array() * hn.array() * r.array() *
                                (1.0 - r.array()))
                                   .matrix();
        const RowMatrix da_z =
            (d_z.array() * z.array() * (1.0 - z.array())).matrix();

        // Gate order: z, r, n for input weights (ids 0..2), hidden weights
        // (3..5), input biases (6..8), hidden biases (9..11).
        const RowMatrix* input_grads[3] = {&da_z, &da_r, &da_n};
        const RowMatrix* hidden_grads[3] = {&da_z, &da_r, &d_hn};
        for (std::size_t k = 0; k < 3; ++k) {
          if (t.requires_grad(ids[k])) {
            MutView(t.MutableGrad(ids[k]), hd, in).noalias() +=
                input_grads[k]->transpose() * xm;
          }
          if (t.requires_grad(ids[k + 3])) {
            MutView(t.MutableGrad(ids[k + 3]), hd, hd).noalias() +=
                hidden_grads[k]->transpose() * hm;
          }
          if (t.requires_grad(ids[k + 6])) {
            MutView(t.MutableGrad(ids[k + 6]), 1, hd) +=
                input_grads[k]->colwise().sum();
          }
          if (t.requires_grad(ids[k + 9])) {
            MutView(t.MutableGrad(ids[k + 9]), 1, hd) +=
                hidden_grads[k]->colwise().sum();
          }
        }
        if (t.requires_grad(xi)) {
          MutMap dx = MutView(t.MutableGrad(xi), n, in);
          for (std::size_t k = 0; k < 3; ++k) {
            dx.noalias() += *input_grads[k] * View(t.value(ids[k]));
          }
        }
        if (t.requires_grad(hi)) {
          MutMap dh = MutView(t.MutableGrad(hi), n, hd);
          dh += (g.array() * (1.0 - z.array())).matrix();
          for (std::size_t k = 0; k < 3; ++k) {
            dh.noalias() += *hidden_grads[k] * View(t.value(ids[k + 3]));
          }
        }
      });
}

}  // namespace monomix
