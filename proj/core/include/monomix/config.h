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
#ifndef MONOMIX_CONFIG_H_
#define MONOMIX_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "monomix/learner.h"

namespace monomix {

enum class EnvKind { kTwoStep, kMicroCombat };
std::string_view EnvKindName(EnvKind kind);  // "two_step", "micro_combat"
EnvKind ParseEnvKind(std::string_view name);

// Where the effective value of a config field came from.
enum class Provenance { kPaper, kHarness, kOverride };
std::string_view ProvenanceName(Provenance p);

// Every knob of one experiment. Field names match the dotted keys of the JSON
// config file (e.g. "training.lr").
struct ExperimentConfig {
  EnvKind env = EnvKind::kTwoStep;
  std::string scenario = "3m";  // builtin name or scenario file
  std::string algorithm = "qmix";  // a mixer name or "heuristic"
  std::uint64_t seed = 1;

  // training.*
  std::int64_t total_env_steps = 10000;
  double gamma = 0.99;
  double lr = 5e-4;
  double rms_alpha = 0.99;
  double rms_eps = 1e-5;
  int buffer_size = 500;
  int batch_size = 32;
  int target_update_episodes = 100;
  int train_steps_per_episode = 1;

  // exploration.*
  double epsilon_start = 1.0;
  double epsilon_finish = 1.0;
  std::int64_t epsilon_anneal_steps = 0;

  // network.*
  int agent_hidden = 64;
  int mixing_hidden = 8;
  int hypernet_hidden = 32;
  bool recurrent = false;
  bool last_action_input = false;

  // evaluation.*
  int eval_interval_episodes = 100;
  int eval_episodes = 20;

  // Dotted key -> source of the value.
  std::map<std::string, Provenance> provenance;

  bool heuristic() const { return algorithm == "heuristic"; }
  // Throws ConfigError naming the offending field.
  void Validate() const;
  LearnerConfig ToLearnerConfig() const;
  EpsilonSchedule Schedule() const;
  std::string ToJson() const;
  // One "key = value [source]" line per field.
  std::string Describe() const;
};

// Defaults for 'env' with provenance filled in.
ExperimentConfig DefaultConfig(EnvKind env);

struct ConfigOverride {
  std::string key;    // dotted key, e.g. "training.lr" or "seed"
  std::string value;  // JSON literal, or a bare string
};

// Starts from the defaults of the env named in the document (or an override
// of "env"), then applies the document and the overrides in order.
ExperimentConfig ParseConfig(std::string_view json_text,
                             const std::vector<ConfigOverride>& overrides = {});
ExperimentConfig LoadConfig(const std::filesystem::path& path,
                            const std::vector<ConfigOverride>& overrides = {});

// Every dotted key accepted by ParseConfig.
std::vector<std::string> ConfigKeys();

}  // namespace monomix

#endif  // MONOMIX_CONFIG_H_
