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
#ifndef MONOMIX_MIXERS_H_
#define MONOMIX_MIXERS_H_

#include <span>
#include <string_view>
#include <vector>

#include "monomix/autodiff.h"
#include "monomix/env.h"
#include "monomix/parameters.h"
#include "monomix/random.h"
#include "monomix/tensor.h"

namespace monomix {

// kNone is independent Q-learning: no joint value, each agent learns alone.
enum class MixerKind { kNone, kVdn, kVdnS, kQmix, kQmixLin, kQmixNs };

// "iql", "vdn", "vdn_s", "qmix", "qmix_lin", "qmix_ns".
std::string_view MixerKindName(MixerKind kind);
MixerKind ParseMixerKind(std::string_view name);
inline bool IsMonotoneMixer(MixerKind kind) { return kind != MixerKind::kNone; }

struct MixerConfig {
  MixerKind kind = MixerKind::kQmix;
  int n_agents = 1;
  int state_dim = 1;
  int mixing_hidden = 32;    // H: width of the ELU mixing layer
  int hypernet_hidden = 32;  // hidden width of the final-bias network
};

// Joint-value head. Parameters are registered under the "mixer." prefix:
//   qmix      hyper_w1, hyper_b1, hyper_w2 (linear in s), hyper_b2.fc1/fc2
//   qmix_lin  hyper_w, hyper_b2.fc1/fc2
//   qmix_ns   w1, b1, w2, b2 (state independent)
//   vdn_s     v.fc1/fc2
//   vdn       none
class Mixer {
 public:
  explicit Mixer(MixerConfig config);

  const MixerConfig& config() const { return config_; }
  MixerKind kind() const { return config_.kind; }

  void AddParameters(ParameterSet& params, Rng& rng) const;

  // 'qs' is [N x n_agents] (chosen utilities), 'states' is [N x state_dim].
  // Returns Q_tot as [N x 1]. Throws ContractError for kNone.
  Var Forward(Tape& tape, const ParameterSet& params, Var qs,
              Var states) const;

  // Single-row convenience evaluation without gradients.
  double Evaluate(const ParameterSet& params, std::span<const double> qs,
                  std::span<const double> state) const;

 private:
  MixerConfig config_;
};

struct JointGreedy {
  std::vector<int> actions;
  double q_tot = 0.0;
};

// Per-agent masked argmax of 'agent_q' ([n x U]) mixed into Q_tot.
JointGreedy JointGreedyValue(const Mixer& mixer, const ParameterSet& params,
                             const Tensor& agent_q,
                             const std::vector<ActionMask>& masks,
                             std::span<const double> state);

}  // namespace monomix

#endif  // MONOMIX_MIXERS_H_
