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

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "monomix/errors.h"
#include "test_util.h"

namespace monomix {
namespace {

using testing::MaxGradientError;
using testing::MaxInputGradientError;
using testing::RandomTensor;

Tensor Eval(Var v) { return v.value(); }

TEST(LinearTest, IdentityWeights) {
  Tape tape;
  Var y = Linear(tape.Constant(Tensor::Vector({3, -1})),
                 tape.Constant(Tensor::Matrix(2, 2, {1, 0, 0, 1})),
                 tape.Constant(Tensor::Vector({0, 0})));
  EXPECT_EQ(Eval(y).values(), (std::vector<double>{3, -1}));
}

TEST(LinearTest, HandMultiply) {
  Tape tape;
  Var y = Linear(tape.Constant(Tensor::Vector({1, 1})),
                 tape.Constant(Tensor::Matrix(2, 2, {1, 2, 3, 4})),
                 tape.Constant(Tensor::Vector({0, 0})));
  EXPECT_EQ(Eval(y).values(), (std::vector<double>{3, 7}));
}

TEST(LinearTest, ZeroInputGivesBias) {
  Tape tape;
  Var y = Linear(tape.Constant(Tensor::Vector({0, 0})),
                 tape.Constant(Tensor::Matrix(2, 2, {9, -4, 2.5, 7})),
                 tape.Constant(Tensor::Vector({5, 6})));
  EXPECT_EQ(Eval(y).values(), (std::vector<double>{5, 6}));
}

TEST(LinearTest, BatchedRowsMatchHandOracle) {
  Rng rng(1);
  const Tensor x = RandomTensor({3, 4}, rng);
  const Tensor w = RandomTensor({2, 4}, rng);
  const Tensor b = RandomTensor({2}, rng);
  Tape tape;
  const Tensor y =
      Eval(Linear(tape.Constant(x), tape.Constant(w), tape.Constant(b)));
  ASSERT_EQ(y.shape(), (Shape{3, 2}));
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t o = 0; o < 2; ++o) {
      double acc = b[o];
      for (std::size_t i = 0; i < 4; ++i) acc += x.at(r, i) * w.at(o, i);
      EXPECT_NEAR(y.at(r, o), acc, 1e-14);
    }
  }
}

TEST(LinearTest, ShapeMismatchNamesBothShapes) {
  Tape tape;
  try {
    Linear(tape.Constant(Tensor::Vector({1, 2, 3})),
           tape.Constant(Tensor({2, 2})), tape.Constant(Tensor({2})));
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("[3]"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[2x2]"), std::string::npos) << msg;
  }
}

TEST(ElementwiseTest, ShapeMismatchThrows) {
  Tape tape;
  EXPECT_THROW(Add(tape.Constant(Tensor({2})), tape.Constant(Tensor({3}))),
               DimensionError);
  EXPECT_THROW(Mul(tape.Constant(Tensor({2, 1})), tape.Constant(Tensor({2}))),
               DimensionError);
}

TEST(ActivationTest, Examples) {
  Tape tape;
  EXPECT_EQ(Eval(Abs(tape.Constant(Tensor::Vector({-2, 0, 3})))).values(),
            (std::vector<double>{2, 0, 3}));
  EXPECT_EQ(Eval(Relu(tape.Constant(Tensor::Vector({-1, 2})))).values(),
            (std::vector<double>{0, 2}));
  EXPECT_NEAR(Eval(Elu(tape.Constant(Tensor::Vector({-1})))).item(),
              std::exp(-1.0) - 1.0, 1e-15);
  EXPECT_NEAR(Eval(Elu(tape.Constant(Tensor::Vector({2.5})))).item(), 2.5,
              0.0);
}

TEST(ActivationTest, SigmoidAndTanhMatchLibm) {
  Tape tape;
  std::vector<double> xs;
  for (double v = -40.0; v <= 40.0; v += 0.37) xs.push_back(v);
  xs.push_back(-800.0);
  xs.push_back(800.0);
  const Tensor s = Eval(Sigmoid(tape.Constant(Tensor::Vector(xs))));
  const Tensor t = Eval(Tanh(tape.Constant(Tensor::Vector(xs))));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(s[i], 1.0 / (1.0 + std::exp(-xs[i])), 1e-15) << xs[i];
    EXPECT_NEAR(t[i], std::tanh(xs[i]), 1e-15) << xs[i];
  }
}

TEST(GradientCheckTest, EveryActivation) {
  Rng rng(11);
  for (Activation kind : {Activation::kRelu, Activation::kElu,
                          Activation::kAbs, Activation::kSigmoid,
                          Activation::kTanh}) {
    // Keep away from the kinks of relu and abs.
    Tensor x = RandomTensor({3, 4}, rng);
    for (double& v : x.data()) {
      if (std::abs(v) < 0.05) v = 0.3;
    }
    const Tensor w = RandomTensor({3, 4}, rng);
    const double err = MaxInputGradientError(x, [&](Tape&, Var in) {
      return WeightedSum(Activate(in, kind), w);
    });
    EXPECT_LT(err, 1e-4) << ActivationName(kind);
  }
}

TEST(GradientCheckTest, ArithmeticAndReductions) {
  Rng rng(12);
  const Tensor other = RandomTensor({3, 4}, rng);
  const Tensor bias = RandomTensor({4}, rng);
  const Tensor weights = RandomTensor({3, 1}, rng);
  const double err =
      MaxInputGradientError(RandomTensor({3, 4}, rng), [&](Tape& tape, Var x) {
        Var o = tape.Constant(other);
        Var a = Add(Mul(x, o), Sub(Square(x), o));
        a = AddBias(Affine(a, 0.7, -0.2), tape.Constant(bias));
        Var rows = Add(RowSum(a), RowDot(x, a));
        return WeightedSum(rows, weights);
      });
  EXPECT_LT(err, 1e-4);
}

TEST(GradientCheckTest, GatherReshapeConcat) {
  Rng rng(13);
  const std::vector<int> index = {2, 0, 1, 2};
  const Tensor w = RandomTensor({6, 1}, rng);
  const Tensor extra = RandomTensor({2, 1}, rng);
  const double err =
      MaxInputGradientError(RandomTensor({2, 6}, rng), [&](Tape& tape, Var x) {
        Var reshaped = Reshape(x, {4, 3});
        Var picked = GatherColumns(reshaped, index);
        Var stacked = ConcatRows({picked, tape.Constant(extra)});
        return WeightedSum(Tanh(stacked), w);
      });
  EXPECT_LT(err, 1e-4);
}

TEST(GradientCheckTest, BatchedVecMat) {
  Rng rng(14);
  const int n = 3;
  const int h = 4;
  ParameterSet params;
  params.Add("q", RandomTensor({2, n}, rng));
  params.Add("w", RandomTensor({2, n * h}, rng));
  const Tensor weights = RandomTensor({2, h}, rng);
  const double err = MaxGradientError(params, [&](Tape& tape,
                                                  const ParameterSet& p) {
    Var out = BatchedVecMat(tape.Parameter(p, "q"), tape.Parameter(p, "w"));
    return WeightedSum(Elu(out), weights);
  });
  EXPECT_LT(err, 1e-4);
}

TEST(BatchedVecMatTest, MatchesLoopOracle) {
  Rng rng(15);
  const Tensor q = RandomTensor({2, 3}, rng);
  const Tensor w = RandomTensor({2, 3 * 5}, rng);
  Tape tape;
  const Tensor out = Eval(BatchedVecMat(tape.Constant(q), tape.Constant(w)));
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t k = 0; k < 5; ++k) {
      double acc = 0.0;
      for (std::size_t a = 0; a < 3; ++a) acc += q.at(r, a) * w.at(r, a * 5 + k);
      EXPECT_NEAR(out.at(r, k), acc, 1e-14);
    }
  }
}

TEST(GatherColumnsTest, OutOfRangeIndexRejected) {
  Tape tape;
  const std::vector<int> index = {3};
  EXPECT_THROW(GatherColumns(tape.Constant(Tensor({1, 3})), index),
               ContractError);
}

// GRU weights laid out as parameters named like the gate fields.
struct GruFixture {
  static constexpr const char* kNames[12] = {
      "w_iz", "w_ir", "w_in", "w_hz", "w_hr", "w_hn",
      "b_iz", "b_ir", "b_in", "b_hz", "b_hr", "b_hn"};

  GruFixture(int in, int hidden, Rng& rng, double scale = 1.0) {
    for (int k = 0; k < 12; ++k) {
      Shape shape;
      if (k < 3) shape = {std::size_t(hidden), std::size_t(in)};
      else if (k < 6) shape = {std::size_t(hidden), std::size_t(hidden)};
      else shape = {std::size_t(hidden)};
      params.Add(kNames[k], RandomTensor(shape, rng, -scale, scale));
    }
  }

  GruWeights Bind(Tape& tape, const ParameterSet& p) const {
    auto v = [&](int k) { return tape.Parameter(p, kNames[k]); };
    return {v(0), v(1), v(2), v(3), v(4), v(5),
            v(6), v(7), v(8), v(9), v(10), v(11)};
  }

  ParameterSet params;
};

// Straight-line scalar evaluation of the three gate equations.
std::vector<double> ScalarGru(const ParameterSet& p,
                              const std::vector<double>& x,
                              const std::vector<double>& h) {
  const std::size_t hidden = h.size();
  auto dot = [](const Tensor& w, std::size_t row,
                const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += w.at(row, i) * v[i];
    return acc;
  };
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  std::vector<double> out(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    const double z = sig(dot(p.value("w_iz"), j, x) + p.value("b_iz")[j] +
                         dot(p.value("w_hz"), j, h) + p.value("b_hz")[j]);
    const double r = sig(dot(p.value("w_ir"), j, x) + p.value("b_ir")[j] +
                         dot(p.value("w_hr"), j, h) + p.value("b_hr")[j]);
    const double n = std::tanh(
        dot(p.value("w_in"), j, x) + p.value("b_in")[j] +
        r * (dot(p.value("w_hn"), j, h) + p.value("b_hn")[j]));
    out[j] = (1.0 - z) * h[j] + z * n;
  }
  return out;
}

TEST(GruCellTest, ZeroParametersHalveHidden) {
  Rng rng(0);
  GruFixture gru(1, 1, rng, 0.0);
  Tape tape;
  const Tensor h = Eval(GruCell(tape.Constant(Tensor({1, 1}, {0.7})),
                                tape.Constant(Tensor({1, 1}, {0.4})),
                                gru.Bind(tape, gru.params)));
  EXPECT_DOUBLE_EQ(h.item(), 0.2);
}

TEST(GruCellTest, ZeroParametersZeroHidden) {
  Rng rng(0);
  GruFixture gru(2, 3, rng, 0.0);
  Tape tape;
  const Tensor h = Eval(GruCell(tape.Constant(Tensor({1, 2}, {0.7, -1})),
                                tape.Constant(Tensor({1, 3})),
                                gru.Bind(tape, gru.params)));
  EXPECT_EQ(h.values(), (std::vector<double>{0, 0, 0}));
}

TEST(GruCellTest, MatchesScalarOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    GruFixture gru(3, 4, rng);
    const Tensor x = RandomTensor({1, 3}, rng);
    const Tensor h = RandomTensor({1, 4}, rng);
    Tape tape;
    const Tensor out = Eval(GruCell(tape.Constant(x), tape.Constant(h),
                                    gru.Bind(tape, gru.params)));
    const std::vector<double> oracle =
        ScalarGru(gru.params, x.values(), h.values());
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(out[j], oracle[j], 1e-14);
  }
}

TEST(GruCellTest, BatchedRowsMatchScalarOracle) {
  Rng rng(22);
  GruFixture gru(2, 3, rng);
  const Tensor x = RandomTensor({4, 2}, rng);
  const Tensor h = RandomTensor({4, 3}, rng);
  Tape tape;
  const Tensor out = Eval(GruCell(tape.Constant(x), tape.Constant(h),
                                  gru.Bind(tape, gru.params)));
  for (std::size_t r = 0; r < 4; ++r) {
    const std::vector<double> oracle = ScalarGru(
        gru.params, {x.at(r, 0), x.at(r, 1)},
        {h.at(r, 0), h.at(r, 1), h.at(r, 2)});
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(out.at(r, j), oracle[j], 1e-14);
    }
  }
}

TEST(GruCellTest, GradientsMatchFiniteDifferences) {
  Rng rng(23);
  GruFixture gru(3, 4, rng);
  gru.params.Add("x", RandomTensor({2, 3}, rng));
  gru.params.Add("h", RandomTensor({2, 4}, rng));
  const Tensor w = RandomTensor({2, 4}, rng);
  // Two chained steps so gradients flow through the hidden path twice.
  auto loss = [&](Tape& tape, const ParameterSet& p) {
    const GruWeights weights = gru.Bind(tape, p);
    Var x = tape.Parameter(p, "x");
    Var h1 = GruCell(x, tape.Parameter(p, "h"), weights);
    Var h2 = GruCell(x, h1, weights);
    return WeightedSum(h2, w);
  };
  EXPECT_LT(MaxGradientError(gru.params, loss), 1e-4);
}

TEST(GruCellTest, ShapeMismatchThrows) {
  Rng rng(24);
  GruFixture gru(3, 4, rng);
  Tape tape;
  EXPECT_THROW(GruCell(tape.Constant(Tensor({1, 2})), tape.Constant(Tensor({1, 4})),
                       gru.Bind(tape, gru.params)),
               DimensionError);
  EXPECT_THROW(GruCell(tape.Constant(Tensor({1, 3})), tape.Constant(Tensor({1, 5})),
                       gru.Bind(tape, gru.params)),
               DimensionError);
}

// Random compositions of the op set, checked at 64-bit precision.
TEST(GradientCheckTest, RandomCompositions) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    ParameterSet params;
    params.Add("x", RandomTensor({3, 4}, rng));
    params.Add("w", RandomTensor({4, 4}, rng));
    params.Add("b", RandomTensor({4}, rng));
    const Tensor sink = RandomTensor({3, 4}, rng);
    std::vector<int> plan(3);
    for (int& s : plan) s = UniformInt(rng, 0, 4);
    auto loss = [&](Tape& tape, const ParameterSet& p) {
      Var v = tape.Parameter(p, "x");
      for (int s : plan) {
        switch (s) {
          case 0:
            v = Linear(v, tape.Parameter(p, "w"), tape.Parameter(p, "b"));
            break;
          case 1: v = Tanh(v); break;
          case 2: v = Mul(Sigmoid(v), v); break;
          case 3: v = Elu(Affine(v, 1.3, 0.1)); break;
          default: v = Add(Square(v), AddBias(v, tape.Parameter(p, "b")));
        }
      }
      return WeightedSum(v, sink);
    };
    EXPECT_LT(MaxGradientError(params, loss, 1e-5), 1e-4) << "trial " << trial;
  }
}

}  // namespace
}  // namespace monomix
