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
#ifndef MONOMIX_SCENARIO_H_
#define MONOMIX_SCENARIO_H_

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace monomix {

enum class UnitType { kMarine = 0, kStalker = 1, kZealot = 2, kColossus = 3 };
inline constexpr int kNumUnitTypes = 4;

std::string_view UnitTypeName(UnitType type);
UnitType ParseUnitType(std::string_view name);

struct UnitStats {
  double max_health = 0.0;
  double max_shield = 0.0;
  double damage = 0.0;
  int cooldown = 1;  // ticks between shots; 1 fires every tick
};

// Hit and shield points for all four types; damage and cooldown are this
// simulator's own choices (marine 6/1, stalker 13/2, zealot 8/1,
// colossus 15/2).
UnitStats DefaultUnitStats(UnitType type);

// Static description of one symmetric combat map.
struct ScenarioConfig {
  std::string name;
  std::vector<UnitType> roster;  // one team; the other team mirrors it
  double map_width = 32.0;
  double map_height = 32.0;
  double sight_range = 9.0;
  double shoot_range = 6.0;
  int episode_limit = 60;
  double move_step = 1.0;
  // Distance between the two cluster centres along x.
  double spawn_gap = 10.0;
  double unit_spacing = 1.0;
  // Each coordinate of every unit is offset by U(-jitter, jitter) per episode.
  double spawn_jitter = 1.0;
  std::array<UnitStats, kNumUnitTypes> stats{
      DefaultUnitStats(UnitType::kMarine), DefaultUnitStats(UnitType::kStalker),
      DefaultUnitStats(UnitType::kZealot),
      DefaultUnitStats(UnitType::kColossus)};

  const UnitStats& stats_of(UnitType t) const {
    return stats[static_cast<int>(t)];
  }
  int team_size() const { return static_cast<int>(roster.size()); }
  // Distinct unit types in the roster, in enum order. Unit-type features are
  // only emitted when there is more than one.
  std::vector<UnitType> distinct_types() const;
  bool mixed_types() const { return distinct_types().size() > 1; }
  bool has_shields() const;

  // Largest possible undiscounted raw reward in one episode: every enemy hit
  // and shield point, 10 per kill and 200 for the wipe.
  double MaxRawReturn() const;

  // Throws ConfigError on an empty roster, non-positive extents, or
  // shoot_range > sight_range.
  void Validate() const;
};

// 3m, 5m, 8m, 2s_3z, 3s_5z, 1c_3s_5z.
std::vector<std::string> BuiltinScenarioNames();
ScenarioConfig BuiltinScenario(std::string_view name);

// Parses a roster string such as "3m" or "1c_3s_5z".
std::vector<UnitType> ParseRoster(std::string_view roster);

// JSON scenario documents. Unspecified fields fall back to the builtin of the
// same name when one exists, otherwise to ScenarioConfig defaults.
ScenarioConfig ParseScenario(std::string_view json_text);
ScenarioConfig LoadScenario(const std::filesystem::path& path);
std::string ScenarioToJson(const ScenarioConfig& scenario);

// Builtin name, or a path to a scenario file.
ScenarioConfig ResolveScenario(std::string_view name_or_path);

}  // namespace monomix

#endif  // MONOMIX_SCENARIO_H_
