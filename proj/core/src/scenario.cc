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
#include "monomix/scenario.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "monomix/errors.h"

namespace monomix {
namespace {

using nlohmann::json;

char TypeLetter(UnitType t) {
  switch (t) {
    case UnitType::kMarine: return 'm';
    case UnitType::kStalker: return 's';
    case UnitType::kZealot: return 'z';
    case UnitType::kColossus: return 'c';
  }
  return '?';
}

int DefaultEpisodeLimit(std::string_view name) {
  if (name == "3m" || name == "5m") return 60;
  if (name == "8m" || name == "2s_3z") return 120;
  if (name == "3s_5z") return 150;
  if (name == "1c_3s_5z") return 200;
  return 60;
}

}  // namespace

std::string_view UnitTypeName(UnitType type) {
  switch (type) {
    case UnitType::kMarine: return "marine";
    case UnitType::kStalker: return "stalker";
    case UnitType::kZealot: return "zealot";
    case UnitType::kColossus: return "colossus";
  }
  return "unknown";
}

UnitType ParseUnitType(std::string_view name) {
  for (int i = 0; i < kNumUnitTypes; ++i) {
    const auto t = static_cast<UnitType>(i);
    if (UnitTypeName(t) == name) return t;
  }
  throw ConfigError("unknown unit type '" + std::string(name) + "'");
}

UnitStats DefaultUnitStats(UnitType type) {
  switch (type) {
    case UnitType::kMarine: return {45.0, 0.0, 6.0, 1};
    case UnitType::kStalker: return {80.0, 80.0, 13.0, 2};
    case UnitType::kZealot: return {100.0, 50.0, 8.0, 1};
    case UnitType::kColossus: return {200.0, 150.0, 15.0, 2};
  }
  return {};
}

std::vector<UnitType> ScenarioConfig::distinct_types() const {
  std::vector<UnitType> out;
  for (int i = 0; i < kNumUnitTypes; ++i) {
    const auto t = static_cast<UnitType>(i);
    if (std::find(roster.begin(), roster.end(), t) != roster.end()) {
      out.push_back(t);
    }
  }
  return out;
}

bool ScenarioConfig::has_shields() const {
  return std::any_of(roster.begin(), roster.end(), [this](UnitType t) {
    return stats_of(t).max_shield > 0.0;
  });
}

double ScenarioConfig::MaxRawReturn() const {
  double total = 0.0;
  for (UnitType t : roster) {
    total += stats_of(t).max_health + stats_of(t).max_shield;
  }
  return total + 10.0 * static_cast<double>(roster.size()) + 200.0;
}

void ScenarioConfig::Validate() const {
  if (roster.empty()) throw ConfigError("scenario '" + name + "': empty roster");
  if (map_width <= 0.0 || map_height <= 0.0) {
    throw ConfigError("scenario '" + name + "': map extent must be positive");
  }
  if (shoot_range <= 0.0 || sight_range <= 0.0) {
    throw ConfigError("scenario '" + name + "': ranges must be positive");
  }
  if (shoot_range > sight_range) {
    throw ConfigError("scenario '" + name +
                      "': shoot_range exceeds sight_range");
  }
  if (episode_limit < 1) {
    throw ConfigError("scenario '" + name + "': episode_limit must be >= 1");
  }
  if (move_step <= 0.0 || spawn_jitter < 0.0 || unit_spacing < 0.0) {
    throw ConfigError("scenario '" + name + "': invalid spawn/move geometry");
  }
  for (const UnitStats& s : stats) {
    if (s.max_health <= 0.0 || s.max_shield < 0.0 || s.damage < 0.0 ||
        s.cooldown < 1) {
      throw ConfigError("scenario '" + name + "': invalid unit stats");
    }
  }
}

std::vector<UnitType> ParseRoster(std::string_view roster) {
  std::vector<UnitType> out;
  std::size_t i = 0;
  while (i < roster.size()) {
    if (roster[i] == '_') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < roster.size() && std::isdigit(static_cast<unsigned char>(roster[j]))) ++j;
    if (j == i || j >= roster.size()) {
      throw ConfigError("bad roster '" + std::string(roster) + "'");
    }
    const int count = std::stoi(std::string(roster.substr(i, j - i)));
    UnitType type;
    switch (roster[j]) {
      case 'm': type = UnitType::kMarine; break;
      case 's': type = UnitType::kStalker; break;
      case 'z': type = UnitType::kZealot; break;
      case 'c': type = UnitType::kColossus; break;
      default:
        throw ConfigError("bad roster letter in '" + std::string(roster) + "'");
    }
    for (int k = 0; k < count; ++k) out.push_back(type);
    i = j + 1;
  }
  if (out.empty()) throw ConfigError("empty roster '" + std::string(roster) + "'");
  std::stable_sort(out.begin(), out.end(), [](UnitType a, UnitType b) {
    // Colossi first, then stalkers, zealots, marines (map naming order).
    auto rank = [](UnitType t) {
      switch (t) {
        case UnitType::kColossus: return 0;
        case UnitType::kStalker: return 1;
        case UnitType::kZealot: return 2;
        case UnitType::kMarine: return 3;
      }
      return 4;
    };
    return rank(a) < rank(b);
  });
  return out;
}

std::vector<std::string> BuiltinScenarioNames() {
  return {"3m", "5m", "8m", "2s_3z", "3s_5z", "1c_3s_5z"};
}

ScenarioConfig BuiltinScenario(std::string_view name) {
  const auto names = BuiltinScenarioNames();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ConfigError("unknown builtin scenario '" + std::string(name) + "'");
  }
  ScenarioConfig s;
  s.name = std::string(name);
  s.roster = ParseRoster(name);
  s.episode_limit = DefaultEpisodeLimit(name);
  s.Validate();
  return s;
}

ScenarioConfig ParseScenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("scenario is not valid JSON: ") + e.what());
  }
  ScenarioConfig s;
  try {
    const std::string name = doc.value("name", std::string("custom"));
    const auto names = BuiltinScenarioNames();
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      s = BuiltinScenario(name);
    }
    s.name = name;
    if (doc.contains("roster")) {
      const json& r = doc.at("roster");
      if (r.is_string()) {
        s.roster = ParseRoster(r.get<std::string>());
      } else {
        s.roster.clear();
        for (const auto& [type, count] : r.items()) {
          for (int k = 0; k < count.get<int>(); ++k) {
            s.roster.push_back(ParseUnitType(type));
          }
        }
      }
    }
    if (doc.contains("map")) {
      s.map_width = doc["map"].value("width", s.map_width);
      s.map_height = doc["map"].value("height", s.map_height);
    }
    s.sight_range = doc.value("sight_range", s.sight_range);
    s.shoot_range = doc.value("shoot_range", s.shoot_range);
    s.episode_limit = doc.value("episode_limit", s.episode_limit);
    s.move_step = doc.value("move_step", s.move_step);
    if (doc.contains("spawn")) {
      const json& sp = doc["spawn"];
      s.spawn_gap = sp.value("gap", s.spawn_gap);
      s.unit_spacing = sp.value("spacing", s.unit_spacing);
      s.spawn_jitter = sp.value("jitter", s.spawn_jitter);
    }
    if (doc.contains("units")) {
      for (const auto& [type, st] : doc["units"].items()) {
        UnitStats& u = s.stats[static_cast<int>(ParseUnitType(type))];
        u.max_health = st.value("health", u.max_health);
        u.max_shield = st.value("shield", u.max_shield);
        u.damage = st.value("damage", u.damage);
        u.cooldown = st.value("cooldown", u.cooldown);
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed scenario: ") + e.what());
  }
  s.Validate();
  return s;
}

ScenarioConfig LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseScenario(buf.str());
}

std::string ScenarioToJson(const ScenarioConfig& s) {
  std::string roster;
  std::vector<UnitType> order = {UnitType::kColossus, UnitType::kStalker,
                                 UnitType::kZealot, UnitType::kMarine};
  for (UnitType t : order) {
    const auto n = std::count(s.roster.begin(), s.roster.end(), t);
    if (n == 0) continue;
    if (!roster.empty()) roster += '_';
    roster += std::to_string(n) + TypeLetter(t);
  }
  json units = json::object();
  for (int i = 0; i < kNumUnitTypes; ++i) {
    const UnitStats& u = s.stats[i];
    units[std::string(UnitTypeName(static_cast<UnitType>(i)))] = {
        {"health", u.max_health},
        {"shield", u.max_shield},
        {"damage", u.damage},
        {"cooldown", u.cooldown}};
  }
  json doc = {{"name", s.name},
              {"roster", roster},
              {"map", {{"width", s.map_width}, {"height", s.map_height}}},
              {"sight_range", s.sight_range},
              {"shoot_range", s.shoot_range},
              {"episode_limit", s.episode_limit},
              {"move_step", s.move_step},
              {"spawn",
               {{"gap", s.spawn_gap},
                {"spacing", s.unit_spacing},
                {"jitter", s.spawn_jitter}}},
              {"units", units}};
  return doc.dump(2);
}

ScenarioConfig ResolveScenario(std::string_view name_or_path) {
  const auto names = BuiltinScenarioNames();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return BuiltinScenario(name_or_path);
  }
  return LoadScenario(std::filesystem::path(std::string(name_or_path)));
}

}  // namespace monomix
