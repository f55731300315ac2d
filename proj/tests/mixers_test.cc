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
#include "monomix/mixers.h"

#include <gtest/gtest.h>

#include <vector>

#include "monomix/errors.h"
#include "oracles.h"
#include "test_util.h"

namespace monomix {
namespace {

constexpr MixerKind kMonotone[] = {MixerKind::kVdn, MixerKind::kVdnS,
                                   MixerKind::kQmix, MixerKind::kQmixLin,
                                   MixerKind::kQmixNs};

struct Instance {
  Mixer mixer;
  ParameterSet params;
};

// Initialises a mixer, then spreads every parameter over U(-scale, scale) so
// the abs and ELU branches are all exercised.
Instance MakeInstance(MixerKind kind, int n, int state_dim, Rng& rng,
                      double scale = 1.0, int hidden = 8) {
  Instance inst{Mixer({.kind = kind, .n_agents = n, .state_dim = state_dim,
                       .mixing_hidden = hidden, .hypernet_hidden = 6}),
                {}};
  inst.mixer.AddParameters(inst.params, rng);
  for (std::size_t i = 0; i < inst.params.size(); ++i) {
    for (double& v : inst.params.mutable_value(i).data()) {
      v = UniformReal(rng, -scale, scale);
    }
  }
  return inst;
}

std::vector<double> RandomVector(std::size_t n, Rng& rng, double lo = -1.0,
                                 double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = UniformReal(rng, lo, hi);
  return v;
}

TEST(MixerKindTest, NamesRoundTrip) {
  for (MixerKind k : {MixerKind::kNone, MixerKind::kVdn, MixerKind::kVdnS,
                      MixerKind::kQmix, MixerKind::kQmixLin,
                      MixerKind::kQmixNs}) {
    EXPECT_EQ(ParseMixerKind(MixerKindName(k)), k);
  }
  EXPECT_EQ(MixerKindName(MixerKind::kNone), "iql");
  EXPECT_THROW(ParseMixerKind("coma"), ConfigError);
}

TEST(VdnTest, Sum) {
  Rng rng(0);
  Instance vdn = MakeInstance(MixerKind::kVdn, 3, 2, rng);
  const std::vector<double> state = {0, 0};
  EXPECT_DOUBLE_EQ(vdn.mixer.Evaluate(vdn.params, {{1.5, 2.5, -1.0}}, state),
                   3.0);
  EXPECT_DOUBLE_EQ(vdn.mixer.Evaluate(vdn.params, {{2.5, -1.0, 1.5}}, state),
                   3.0);
  Instance single = MakeInstance(MixerKind::kVdn, 1, 2, rng);
  EXPECT_DOUBLE_EQ(single.mixer.Evaluate(single.params, {{-4.25}}, state),
                   -4.25);
}

TEST(VdnSTest, ZeroBiasNetworkEqualsVdn) {
  Rng rng(1);
  Instance inst = MakeInstance(MixerKind::kVdnS, 3, 4, rng);
  for (std::size_t i = 0; i < inst.params.size(); ++i) {
    for (double& v : inst.params.mutable_value(i).data()) v = 0.0;
  }
  const std::vector<double> qs = {0.5, -2.0, 4.0};
  EXPECT_DOUBLE_EQ(inst.mixer.Evaluate(inst.params, qs, RandomVector(4, rng)),
                   2.5);
}

TEST(VdnSTest, AdditiveWithUnitGradients) {
  Rng rng(2);
  Instance inst = MakeInstance(MixerKind::kVdnS, 3, 4, rng);
  const std::vector<double> state = RandomVector(4, rng);
  const std::vector<double> qs = RandomVector(3, rng);
  std::vector<double> shifted = qs;
  for (double& q : shifted) q += 0.75;
  EXPECT_NEAR(inst.mixer.Evaluate(inst.params, shifted, state),
              inst.mixer.Evaluate(inst.params, qs, state) + 3 * 0.75, 1e-12);
  Tape tape;
  Var q = tape.Variable(Tensor::Matrix(1, 3, qs));
  Var out = inst.mixer.Forward(tape, inst.params, q,
                               tape.Constant(Tensor::Matrix(1, 4, state)));
  tape.Backward(out);
  EXPECT_EQ(q.grad().values(), (std::vector<double>{1, 1, 1}));
}

TEST(QmixTest, ZeroParametersGiveZero) {
  Rng rng(3);
  Instance inst = MakeInstance(MixerKind::kQmix, 3, 4, rng);
  for (std::size_t i = 0; i < inst.params.size(); ++i) {
    for (double& v : inst.params.mutable_value(i).data()) v = 0.0;
  }
  for (int trial = 0; trial < 5; ++trial) {
    EXPECT_EQ(inst.mixer.Evaluate(inst.params, RandomVector(3, rng, -5, 5),
                                  RandomVector(4, rng)),
              0.0);
  }
}

TEST(QmixTest, ParameterShapes) {
  Rng rng(4);
  Instance inst = MakeInstance(MixerKind::kQmix, 3, 5, rng, 1.0, 8);
  EXPECT_EQ(inst.params.value("mixer.hyper_w1.weight").shape(),
            (Shape{24, 5}));
  EXPECT_EQ(inst.params.value("mixer.hyper_b1.weight").shape(), (Shape{8, 5}));
  EXPECT_EQ(inst.params.value("mixer.hyper_w2.weight").shape(), (Shape{8, 5}));
  EXPECT_EQ(inst.params.value("mixer.hyper_b2.fc1.weight").shape(),
            (Shape{6, 5}));
  EXPECT_EQ(inst.params.value("mixer.hyper_b2.fc2.weight").shape(),
            (Shape{1, 6}));
}

TEST(MixerTest, MatchesScalarOracle) {
  Rng rng(5);
  for (MixerKind kind : kMonotone) {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = UniformInt(rng, 1, 5);
      const int sd = UniformInt(rng, 1, 6);
      Instance inst = MakeInstance(kind, n, sd, rng, 1.5);
      const std::vector<double> qs = RandomVector(std::size_t(n), rng, -3, 3);
      const std::vector<double> state = RandomVector(std::size_t(sd), rng);
      EXPECT_NEAR(inst.mixer.Evaluate(inst.params, qs, state),
                  oracle::Mix(inst.mixer.config(), inst.params, qs, state),
                  1e-12)
          << MixerKindName(kind);
    }
  }
}

TEST(MixerTest, BatchedForwardMatchesRowwise) {
  Rng rng(6);
  for (MixerKind kind : kMonotone) {
    Instance inst = MakeInstance(kind, 3, 4, rng);
    const Tensor qs = testing::RandomTensor({5, 3}, rng);
    const Tensor st = testing::RandomTensor({5, 4}, rng);
    Tape tape;
    const Tensor out =
        inst.mixer.Forward(tape, inst.params, tape.Constant(qs),
                           tape.Constant(st))
            .value();
    ASSERT_EQ(out.shape(), (Shape{5, 1}));
    for (std::size_t r = 0; r < 5; ++r) {
      const std::vector<double> q(qs.data().begin() + r * 3,
                                  qs.data().begin() + r * 3 + 3);
      const std::vector<double> s(st.data().begin() + r * 4,
                                  st.data().begin() + r * 4 + 4);
      EXPECT_NEAR(out[r], inst.mixer.Evaluate(inst.params, q, s), 1e-13);
    }
  }
}

TEST(MixerTest, DimensionMismatchThrows) {
  Rng rng(7);
  Instance inst = MakeInstance(MixerKind::kQmix, 3, 4, rng);
  Tape tape;
  EXPECT_THROW(inst.mixer.Forward(tape, inst.params,
                                  tape.Constant(Tensor({2, 2})),
                                  tape.Constant(Tensor({2, 4}))),
               DimensionError);
  EXPECT_THROW(inst.mixer.Forward(tape, inst.params,
                                  tape.Constant(Tensor({2, 3})),
                                  tape.Constant(Tensor({2, 5}))),
               DimensionError);
  Instance none = MakeInstance(MixerKind::kNone, 3, 4, rng);
  EXPECT_THROW(none.mixer.Forward(tape, none.params,
                                  tape.Constant(Tensor({2, 3})),
                                  tape.Constant(Tensor({2, 4}))),
               ContractError);
}

TEST(MixerTest, MonotoneInEveryAgent) {
  Rng rng(8);
  for (MixerKind kind : kMonotone) {
    for (int trial = 0; trial < 200; ++trial) {
      Instance inst = MakeInstance(kind, 3, 4, rng, 2.0);
      const std::vector<double> state = RandomVector(4, rng);
      const std::vector<double> qs = RandomVector(3, rng, -4, 4);
      const double base = inst.mixer.Evaluate(inst.params, qs, state);
      for (std::size_t a = 0; a < 3; ++a) {
        std::vector<double> up = qs;
        up[a] += 1.0;
        EXPECT_GE(inst.mixer.Evaluate(inst.params, up, state), base)
            << MixerKindName(kind);
      }
    }
  }
}

TEST(MixerTest, AnalyticGradientNonNegativeAndMatchesFiniteDifference) {
  Rng rng(9);
  for (MixerKind kind : kMonotone) {
    Instance inst = MakeInstance(kind, 2, 3, rng);
    const Tensor st = testing::RandomTensor({1, 3}, rng);
    const double err = testing::MaxInputGradientError(
        testing::RandomTensor({1, 2}, rng), [&](Tape& tape, Var q) {
          return inst.mixer.Forward(tape, inst.params, q, tape.Constant(st));
        });
    EXPECT_LT(err, 1e-4) << MixerKindName(kind);
  }
}

TEST(QmixLinTest, UnitWeightsZeroBiasIsVdn) {
  Rng rng(10);
  Instance inst = MakeInstance(MixerKind::kQmixLin, 3, 2, rng);
  // Zero hyper weights with bias -1 produce |w| = 1 for every agent.
  for (double& v : inst.params.mutable_value("mixer.hyper_w.weight").data()) {
    v = 0.0;
  }
  for (double& v : inst.params.mutable_value("mixer.hyper_w.bias").data()) {
    v = -1.0;
  }
  for (const char* name : {"mixer.hyper_b2.fc2.weight",
                           "mixer.hyper_b2.fc2.bias"}) {
    for (double& v : inst.params.mutable_value(name).data()) v = 0.0;
  }
  const std::vector<double> qs = {1.5, 2.5, -1.0};
  EXPECT_DOUBLE_EQ(inst.mixer.Evaluate(inst.params, qs, RandomVector(2, rng)),
                   3.0);
}

TEST(QmixNsTest, StateIndependent) {
  Rng rng(11);
  Instance inst = MakeInstance(MixerKind::kQmixNs, 3, 4, rng);
  const std::vector<double> qs = RandomVector(3, rng);
  EXPECT_EQ(inst.mixer.Evaluate(inst.params, qs, RandomVector(4, rng)),
            inst.mixer.Evaluate(inst.params, qs, RandomVector(4, rng)));
}

TEST(QmixTest, ZeroStateGivesFixedMonotoneFunction) {
  Rng rng(12);
  Instance inst = MakeInstance(MixerKind::kQmix, 2, 3, rng);
  const std::vector<double> zero = {0, 0, 0};
  double prev = -1e300;
  for (double q = -3.0; q <= 3.0; q += 0.25) {
    const double v = inst.mixer.Evaluate(inst.params, {{q, 0.5}}, zero);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(JointGreedyTest, MatchesBruteForce) {
  Rng rng(13);
  for (MixerKind kind : kMonotone) {
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2;
      const int u = 3;
      Instance inst = MakeInstance(kind, n, 3, rng, 1.5);
      const std::vector<double> state = RandomVector(3, rng);
      Tensor q({std::size_t(n), std::size_t(u)});
      std::vector<std::vector<double>> rows(n);
      std::vector<ActionMask> masks(n);
      for (int a = 0; a < n; ++a) {
        rows[a] = RandomVector(std::size_t(u), rng, -2, 2);
        for (int k = 0; k < u; ++k) q.at(a, k) = rows[a][k];
        masks[a] = {1, static_cast<std::uint8_t>(trial % 2), 1};
      }
      const JointGreedy fast =
          JointGreedyValue(inst.mixer, inst.params, q, masks, state);
      const oracle::JointArgmax slow = oracle::BruteForceJointArgmax(
          [&](const std::vector<double>& chosen) {
            return inst.mixer.Evaluate(inst.params, chosen, state);
          },
          rows, masks);
      EXPECT_NEAR(fast.q_tot, slow.value, 1e-12) << MixerKindName(kind);
      for (int a = 0; a < n; ++a) {
        EXPECT_TRUE(masks[a][fast.actions[a]]);
      }
    }
  }
}

TEST(OracleTest, FitOracles) {
  const double monotone[2][2] = {{0, 1}, {1, 8}};
  const double non_monotone[2][2] = {{2, 1}, {1, 8}};
  EXPECT_NEAR(oracle::AdditiveFitMse(monotone), 2.25, 1e-12);
  EXPECT_NEAR(oracle::MonotoneFactoredMse(monotone), 0.0, 1e-12);
  EXPECT_NEAR(oracle::MonotoneFactoredMse(non_monotone), 1.0 / 6.0, 1e-12);
  const double additive[2][2] = {{1, 3}, {2, 4}};
  EXPECT_NEAR(oracle::AdditiveFitMse(additive), 0.0, 1e-12);
}

}  // namespace
}  // namespace monomix
