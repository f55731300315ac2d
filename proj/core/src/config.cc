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
#include "monomix/config.h"

#include <fstream>
#include <functional>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "monomix/errors.h"
#include "monomix/mixers.h"
#include "monomix/scenario.h"

namespace monomix {
namespace {

using nlohmann::json;

struct Field {
  std::string key;
  std::function<json(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const json&)> set;
};

template <typename T>
Field Bind(std::string key, T ExperimentConfig::*member) {
  return {std::move(key),
          [member](const ExperimentConfig& c) { return json(c.*member); },
          [member](ExperimentConfig& c, const json& v) {
            if constexpr (std::is_same_v<T, bool>) {
              if (!v.is_boolean()) throw json::type_error::create(302, "expected a boolean", &v);
            } else if constexpr (std::is_arithmetic_v<T>) {
              if (!v.is_number()) throw json::type_error::create(302, "expected a number", &v);
              if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) {
                  throw json::type_error::create(302, "expected an integer", &v);
                }
                if constexpr (std::is_unsigned_v<T>) {
                  if (v.is_number_integer() && !v.is_number_unsigned()) {
                    throw json::type_error::create(302, "expected a non-negative integer", &v);
                  }
                }
              }
            } else {
              if (!v.is_string()) throw json::type_error::create(302, "expected a string", &v);
            }
            c.*member = v.get<T>();
          }};
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    f.push_back({"env",
                 [](const ExperimentConfig& c) {
                   return json(std::string(EnvKindName(c.env)));
                 },
                 [](ExperimentConfig& c, const json& v) {
                   if (!v.is_string()) throw json::type_error::create(302, "expected a string", &v);
                   c.env = ParseEnvKind(v.get<std::string>());
                 }});
    f.push_back(Bind("scenario", &ExperimentConfig::scenario));
    f.push_back(Bind("algorithm", &ExperimentConfig::algorithm));
    f.push_back(Bind("seed", &ExperimentConfig::seed));
    f.push_back(Bind("training.total_env_steps", &ExperimentConfig::total_env_steps));
    f.push_back(Bind("training.gamma", &ExperimentConfig::gamma));
    f.push_back(Bind("training.lr", &ExperimentConfig::lr));
    f.push_back(Bind("training.rms_alpha", &ExperimentConfig::rms_alpha));
    f.push_back(Bind("training.rms_eps", &ExperimentConfig::rms_eps));
    f.push_back(Bind("training.buffer_size", &ExperimentConfig::buffer_size));
    f.push_back(Bind("training.batch_size", &ExperimentConfig::batch_size));
    f.push_back(Bind("training.target_update_episodes",
                     &ExperimentConfig::target_update_episodes));
    f.push_back(Bind("training.train_steps_per_episode",
                     &ExperimentConfig::train_steps_per_episode));
    f.push_back(Bind("exploration.epsilon_start", &ExperimentConfig::epsilon_start));
    f.push_back(Bind("exploration.epsilon_finish", &ExperimentConfig::epsilon_finish));
    f.push_back(Bind("exploration.epsilon_anneal_steps",
                     &ExperimentConfig::epsilon_anneal_steps));
    f.push_back(Bind("network.agent_hidden", &ExperimentConfig::agent_hidden));
    f.push_back(Bind("network.mixing_hidden", &ExperimentConfig::mixing_hidden));
    f.push_back(Bind("network.hypernet_hidden", &ExperimentConfig::hypernet_hidden));
    f.push_back(Bind("network.recurrent", &ExperimentConfig::recurrent));
    f.push_back(Bind("network.last_action_input",
                     &ExperimentConfig::last_action_input));
    f.push_back(Bind("evaluation.interval_episodes",
                     &ExperimentConfig::eval_interval_episodes));
    f.push_back(Bind("evaluation.episodes", &ExperimentConfig::eval_episodes));
    return f;
  }();
  return fields;
}

const Field& FindField(const std::string& key) {
  for (const Field& f : Fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

void Flatten(const json& node, const std::string& prefix,
             std::vector<std::pair<std::string, json>>& out) {
  if (node.is_object() && !node.empty()) {
    for (const auto& [k, v] : node.items()) {
      Flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    }
    return;
  }
  if (prefix.empty()) {
    if (node.is_object() || node.is_null()) return;
    throw ConfigError("config document must be a JSON object");
  }
  out.emplace_back(prefix, node);
}

json OverrideValue(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return json(text);
  }
}

void Apply(ExperimentConfig& c, const std::string& key, const json& value) {
  const Field& f = FindField(key);
  try {
    f.set(c, value);
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
  c.provenance[key] = Provenance::kOverride;
}

}  // namespace

std::string_view EnvKindName(EnvKind kind) {
  return kind == EnvKind::kTwoStep ? "two_step" : "micro_combat";
}

EnvKind ParseEnvKind(std::string_view name) {
  if (name == "two_step") return EnvKind::kTwoStep;
  if (name == "micro_combat") return EnvKind::kMicroCombat;
  throw ConfigError("unknown env '" + std::string(name) + "'");
}

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kPaper: return "paper";
    case Provenance::kHarness: return "harness";
    case Provenance::kOverride: return "override";
  }
  return "unknown";
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const Field& f : Fields()) keys.push_back(f.key);
  return keys;
}

ExperimentConfig DefaultConfig(EnvKind env) {
  ExperimentConfig c;
  c.env = env;
  const bool micro = env == EnvKind::kMicroCombat;
  if (micro) {
    c.total_env_steps = 200000;
    c.buffer_size = 5000;
    c.target_update_episodes = 200;
    c.epsilon_start = 1.0;
    c.epsilon_finish = 0.05;
    c.epsilon_anneal_steps = 50000;
    c.mixing_hidden = 32;
    c.recurrent = true;
    c.last_action_input = true;
  }
  const std::vector<std::string> paper = {
      "training.gamma",
      "training.lr",
      "training.rms_alpha",
      "training.buffer_size",
      "training.batch_size",
      "training.target_update_episodes",
      "exploration.epsilon_start",
      "exploration.epsilon_finish",
      "exploration.epsilon_anneal_steps",
      "network.agent_hidden",
      "network.mixing_hidden",
      "network.recurrent",
      "network.last_action_input",
      "evaluation.interval_episodes",
      "evaluation.episodes"};
  for (const std::string& key : ConfigKeys()) {
    c.provenance[key] = Provenance::kHarness;
  }
  for (const std::string& key : paper) c.provenance[key] = Provenance::kPaper;
  if (micro) {
    c.provenance["network.hypernet_hidden"] = Provenance::kPaper;
  } else {
    c.provenance["training.total_env_steps"] = Provenance::kPaper;
  }
  return c;
}

void ExperimentConfig::Validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError("config key '" + key + "': " + why);
  };
  if (!heuristic()) {
    try {
      ParseMixerKind(algorithm);
    } catch (const ConfigError&) {
      fail("algorithm", "unknown algorithm '" + algorithm + "'");
    }
  } else if (env != EnvKind::kMicroCombat) {
    fail("algorithm", "heuristic requires env micro_combat");
  }
  if (env == EnvKind::kMicroCombat) ResolveScenario(scenario);
  if (total_env_steps < 1) fail("training.total_env_steps", "must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) fail("training.gamma", "must lie in [0, 1)");
  if (!(lr >= 0.0)) fail("training.lr", "must be >= 0");
  if (!(rms_alpha >= 0.0 && rms_alpha < 1.0)) {
    fail("training.rms_alpha", "must lie in [0, 1)");
  }
  if (!(rms_eps > 0.0)) fail("training.rms_eps", "must be > 0");
  if (buffer_size < 1) fail("training.buffer_size", "must be >= 1");
  if (batch_size < 1) fail("training.batch_size", "must be >= 1");
  if (target_update_episodes < 1) {
    fail("training.target_update_episodes", "must be >= 1");
  }
  if (train_steps_per_episode < 0) {
    fail("training.train_steps_per_episode", "must be >= 0");
  }
  for (const auto& [key, v] : {std::pair{"exploration.epsilon_start", epsilon_start},
                               std::pair{"exploration.epsilon_finish", epsilon_finish}}) {
    if (!(v >= 0.0 && v <= 1.0)) fail(key, "must lie in [0, 1]");
  }
  if (epsilon_anneal_steps < 0) {
    fail("exploration.epsilon_anneal_steps", "must be >= 0");
  }
  if (agent_hidden < 1) fail("network.agent_hidden", "must be >= 1");
  if (mixing_hidden < 1) fail("network.mixing_hidden", "must be >= 1");
  if (hypernet_hidden < 1) fail("network.hypernet_hidden", "must be >= 1");
  if (eval_interval_episodes < 1) {
    fail("evaluation.interval_episodes", "must be >= 1");
  }
  if (eval_episodes < 1) fail("evaluation.episodes", "must be >= 1");
}

LearnerConfig ExperimentConfig::ToLearnerConfig() const {
  LearnerConfig l;
  l.mixer = ParseMixerKind(algorithm);
  l.agent_hidden = agent_hidden;
  l.recurrent = recurrent;
  l.last_action_input = last_action_input;
  l.mixing_hidden = mixing_hidden;
  l.hypernet_hidden = hypernet_hidden;
  l.gamma = gamma;
  l.optimizer.learning_rate = lr;
  l.optimizer.alpha = rms_alpha;
  l.optimizer.epsilon = rms_eps;
  l.batch_size = batch_size;
  l.target_update_episodes = target_update_episodes;
  return l;
}

EpsilonSchedule ExperimentConfig::Schedule() const {
  return EpsilonSchedule{epsilon_start, epsilon_finish, epsilon_anneal_steps};
}

std::string ExperimentConfig::ToJson() const {
  json doc = json::object();
  for (const Field& f : Fields()) {
    doc[json::json_pointer("/" + [&] {
      std::string p = f.key;
      for (char& ch : p) {
        if (ch == '.') ch = '/';
      }
      return p;
    }())] = f.get(*this);
  }
  return doc.dump(2);
}

std::string ExperimentConfig::Describe() const {
  std::ostringstream out;
  for (const Field& f : Fields()) {
    const auto it = provenance.find(f.key);
    const Provenance p =
        it == provenance.end() ? Provenance::kHarness : it->second;
    out << f.key << " = " << f.get(*this).dump() << "  [" << ProvenanceName(p)
        << "]\n";
  }
  return out.str();
}

ExperimentConfig ParseConfig(std::string_view json_text,
                             const std::vector<ConfigOverride>& overrides) {
  json doc = json::object();
  bool blank = true;
  for (char ch : json_text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
  }
  if (!blank) {
    try {
      doc = json::parse(json_text);
    } catch (const json::exception& e) {
      throw FormatError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  std::vector<std::pair<std::string, json>> settings;
  Flatten(doc, "", settings);
  for (const ConfigOverride& o : overrides) {
    settings.emplace_back(o.key, OverrideValue(o.value));
  }
  EnvKind env = EnvKind::kTwoStep;
  for (const auto& [key, value] : settings) {
    if (key != "env") continue;
    if (!value.is_string()) throw ConfigError("config key 'env': expected a string");
    env = ParseEnvKind(value.get<std::string>());
  }
  ExperimentConfig c = DefaultConfig(env);
  for (const auto& [key, value] : settings) Apply(c, key, value);
  c.Validate();
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path,
                            const std::vector<ConfigOverride>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str(), overrides);
}

}  // namespace monomix
