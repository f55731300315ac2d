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
#ifndef MONOMIX_TESTS_ORACLES_H_
#define MONOMIX_TESTS_ORACLES_H_

// Reference implementations written independently of the library code paths,
// used by the unit tests and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "monomix/mixers.h"
#include "monomix/parameters.h"

namespace monomix::oracle {

inline double Elu(double v) { return v > 0.0 ? v : std::exp(v) - 1.0; }
inline double Relu(double v) { return v > 0.0 ? v : 0.0; }

// out[i] = sum_j w[i, j] * x[j] + b[i], with the weight read from 'params'.
inline std::vector<double> Dense(const ParameterSet& params,
                                 const std::string& name,
                                 const std::vector<double>& x) {
  const Tensor& w = params.value(name + ".weight");
  const Tensor& b = params.value(name + ".bias");
  std::vector<double> out(w.rows());
  for (std::size_t i = 0; i < w.rows(); ++i) {
    double acc = b[i];
    for (std::size_t j = 0; j < x.size(); ++j) acc += w.at(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

inline double FinalBias(const ParameterSet& params, const std::string& prefix,
                        const std::vector<double>& state) {
  std::vector<double> h = Dense(params, prefix + ".fc1", state);
  for (double& v : h) v = Relu(v);
  return Dense(params, prefix + ".fc2", h)[0];
}

// Scalar evaluation of every mixer, one equation at a time.
inline double Mix(const MixerConfig& cfg, const ParameterSet& params,
                  const std::vector<double>& qs,
                  const std::vector<double>& state) {
  const std::size_t n = qs.size();
  double sum = 0.0;
  for (double q : qs) sum += q;
  switch (cfg.kind) {
    case MixerKind::kNone:
      return std::numeric_limits<double>::quiet_NaN();
    case MixerKind::kVdn:
      return sum;
    case MixerKind::kVdnS:
      return sum + FinalBias(params, "mixer.v", state);
    case MixerKind::kQmix: {
      const auto h = static_cast<std::size_t>(cfg.mixing_hidden);
      const std::vector<double> w1 = Dense(params, "mixer.hyper_w1", state);
      const std::vector<double> b1 = Dense(params, "mixer.hyper_b1", state);
      const std::vector<double> w2 = Dense(params, "mixer.hyper_w2", state);
      double out = FinalBias(params, "mixer.hyper_b2", state);
      for (std::size_t k = 0; k < h; ++k) {
        double pre = b1[k];
        for (std::size_t a = 0; a < n; ++a) {
          pre += qs[a] * std::abs(w1[a * h + k]);
        }
        out += Elu(pre) * std::abs(w2[k]);
      }
      return out;
    }
    case MixerKind::kQmixLin: {
      const std::vector<double> w = Dense(params, "mixer.hyper_w", state);
      double out = FinalBias(params, "mixer.hyper_b2", state);
      for (std::size_t a = 0; a < n; ++a) out += qs[a] * std::abs(w[a]);
      return out;
    }
    case MixerKind::kQmixNs: {
      const Tensor& w1 = params.value("mixer.layer1.weight");
      const Tensor& b1 = params.value("mixer.layer1.bias");
      const Tensor& w2 = params.value("mixer.layer2.weight");
      double out = params.value("mixer.layer2.bias")[0];
      for (std::size_t k = 0; k < w1.rows(); ++k) {
        double pre = b1[k];
        for (std::size_t a = 0; a < n; ++a) pre += std::abs(w1.at(k, a)) * qs[a];
        out += std::abs(w2.at(0, k)) * Elu(pre);
      }
      return out;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

struct JointArgmax {
  std::vector<int> actions;
  double value = -std::numeric_limits<double>::infinity();
};

// Exhaustive search over every available joint action.
inline JointArgmax BruteForceJointArgmax(
    const std::function<double(const std::vector<double>&)>& q_tot,
    const std::vector<std::vector<double>>& agent_q,
    const std::vector<std::vector<std::uint8_t>>& masks) {
  const std::size_t n = agent_q.size();
  JointArgmax best;
  std::vector<int> idx(n, 0);
  while (true) {
    bool ok = true;
    std::vector<double> chosen(n);
    for (std::size_t a = 0; a < n; ++a) {
      ok = ok && masks[a][static_cast<std::size_t>(idx[a])];
      chosen[a] = agent_q[a][static_cast<std::size_t>(idx[a])];
    }
    if (ok) {
      const double v = q_tot(chosen);
      if (v > best.value) {
        best.value = v;
        best.actions = idx;
      }
    }
    std::size_t a = 0;
    while (a < n && ++idx[a] == static_cast<int>(agent_q[a].size())) {
      idx[a] = 0;
      ++a;
    }
    if (a == n) break;
  }
  return best;
}

// Mean squared error of the least-squares fit p[i][j] ~ x_i + y_j over a
// 2x2 payoff matrix: fitted = row mean + column mean - grand mean.
inline double AdditiveFitMse(const double p[2][2]) {
  const double grand = (p[0][0] + p[0][1] + p[1][0] + p[1][1]) / 4.0;
  double sse = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double row = (p[i][0] + p[i][1]) / 2.0;
      const double col = (p[0][j] + p[1][j]) / 2.0;
      const double r = p[i][j] - (row + col - grand);
      sse += r * r;
    }
  }
  return sse / 4.0;
}

// Smallest MSE achievable by any Q_tot = f(q1(u1), q2(u2)) with f
// non-decreasing in both arguments. Each agent's two values are ordered one
// way or the other; for each of the four orderings the fit is an isotonic
// regression on the induced 2x2 product order. Its optimum is a block-mean
// solution, so enumerating all 15 partitions of the four cells into blocks
// and keeping the feasible ones yields the exact minimum.
inline double MonotoneFactoredMse(const double p[2][2]) {
  const double cells[4] = {p[0][0], p[0][1], p[1][0], p[1][1]};
  double best = std::numeric_limits<double>::infinity();
  // Restricted growth strings enumerate set partitions of 4 cells.
  std::vector<std::vector<int>> partitions;
  for (int b = 0; b < 256; ++b) {
    std::vector<int> g = {b & 3, (b >> 2) & 3, (b >> 4) & 3, (b >> 6) & 3};
    bool valid = g[0] == 0;
    int max_seen = 0;
    for (int k = 1; k < 4 && valid; ++k) {
      valid = g[k] <= max_seen + 1;
      max_seen = std::max(max_seen, g[k]);
    }
    if (valid) partitions.push_back(g);
  }
  for (int order1 = 0; order1 < 2; ++order1) {
    for (int order2 = 0; order2 < 2; ++order2) {
      // rank of agent i's action under the chosen ordering
      auto r1 = [&](int u) { return order1 == 0 ? u : 1 - u; };
      auto r2 = [&](int u) { return order2 == 0 ? u : 1 - u; };
      for (const auto& g : partitions) {
        double sum[4] = {0, 0, 0, 0};
        int count[4] = {0, 0, 0, 0};
        for (int k = 0; k < 4; ++k) {
          sum[g[k]] += cells[k];
          ++count[g[k]];
        }
        double fit[4];
        for (int k = 0; k < 4; ++k) fit[k] = sum[g[k]] / count[g[k]];
        bool feasible = true;
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            const int ua1 = a / 2, ua2 = a % 2, ub1 = b / 2, ub2 = b % 2;
            if (r1(ua1) <= r1(ub1) && r2(ua2) <= r2(ub2) &&
                fit[a] > fit[b] + 1e-12) {
              feasible = false;
            }
          }
        }
        if (!feasible) continue;
        double sse = 0.0;
        for (int k = 0; k < 4; ++k) sse += (cells[k] - fit[k]) * (cells[k] - fit[k]);
        best = std::min(best, sse / 4.0);
      }
    }
  }
  return best;
}

}  // namespace monomix::oracle

#endif  // MONOMIX_TESTS_ORACLES_H_
