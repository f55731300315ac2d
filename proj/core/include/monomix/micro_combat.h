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
#ifndef MONOMIX_MICRO_COMBAT_H_
#define MONOMIX_MICRO_COMBAT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "monomix/env.h"
#include "monomix/scenario.h"

namespace monomix {

enum class Team { kAlly, kEnemy };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double Distance(const Vec2& a, const Vec2& b);

struct UnitState {
  Team team = Team::kAlly;
  UnitType unit_type = UnitType::kMarine;
  Vec2 position;
  double health = 0.0;
  double shield = 0.0;
  int cooldown = 0;  // ticks until the unit may fire again
  bool alive = true;
  int attack_target = -1;  // persistent focus used by the scripted controllers
};

struct World {
  std::vector<UnitState> allies;
  std::vector<UnitState> enemies;
  int step = 0;
};

// Action layout shared by both teams.
namespace combat_action {
inline constexpr int kNoop = 0;
inline constexpr int kStop = 1;
inline constexpr int kMoveNorth = 2;  // +y
inline constexpr int kMoveSouth = 3;  // -y
inline constexpr int kMoveEast = 4;   // +x
inline constexpr int kMoveWest = 5;   // -x
inline constexpr int kAttackBase = 6;  // kAttackBase + j attacks opponent j
}  // namespace combat_action

int CombatActionCount(const ScenarioConfig& scenario);
int CombatObservationDim(const ScenarioConfig& scenario);
int CombatStateDim(const ScenarioConfig& scenario);

// Mirrored clusters either side of the map centre. Allies sit west, enemies
// east; every unit receives independent seeded jitter.
World SpawnWorld(const ScenarioConfig& scenario, std::uint64_t seed);

// Own slot: health fraction, shield fraction (shielded maps), unit-type
// one-hot (mixed maps). Then one slot per other ally followed by one per
// enemy: visible, distance, dx, dy (all divided by the sight range), and the
// type one-hot on mixed maps. Dead agents observe all zeros.
std::vector<double> BuildObservation(const World& world,
                                     const ScenarioConfig& scenario,
                                     int agent);

// Per unit (allies then enemies): centre-relative x and y, health fraction,
// shield fraction (shielded maps), cooldown fraction, type one-hot (mixed
// maps). Followed by the one-hot last action of every ally; negative entries
// in 'last_joint_action' encode "no action yet".
std::vector<double> BuildState(const World& world,
                               const ScenarioConfig& scenario,
                               std::span<const int> last_joint_action);

ActionMask UnitAvailableActions(const World& world,
                                const ScenarioConfig& scenario, Team team,
                                int index);

// Nearest living ally, kept until it dies; attack when in range, otherwise
// close the larger coordinate gap. Updates the enemies' attack_target.
std::vector<int> ScriptedEnemyPolicy(World& world,
                                     const ScenarioConfig& scenario);

// The same rule applied to the allied team with full observability.
std::vector<int> HeuristicAllyPolicy(World& world,
                                     const ScenarioConfig& scenario);

struct TickReport {
  double damage_dealt = 0.0;      // summed over allied attacks
  double enemy_points_lost = 0.0;  // drop in enemy health + shield
  double damage_taken = 0.0;      // summed over enemy attacks
  int enemies_killed = 0;
  int allies_killed = 0;
  bool all_enemies_dead = false;
  bool all_allies_dead = false;
  double raw_reward = 0.0;
};

// Moves commit first; then every attack chosen at the start of the tick
// lands, shield first, capped at the target's remaining points. Units that
// fire go on cooldown; cooldowns tick down; deaths are resolved last.
TickReport ResolveTick(World& world, const ScenarioConfig& scenario,
                       std::span<const int> ally_actions,
                       std::span<const int> enemy_actions);

// Scales raw reward so a perfect episode returns kMaxCombatReturn.
inline constexpr double kMaxCombatReturn = 20.0;
double NormaliseReward(double raw_reward, double max_raw_return);

class MicroCombatEnv : public MultiAgentEnv {
 public:
  explicit MicroCombatEnv(ScenarioConfig scenario, double gamma = 0.99);

  const EnvSpec& spec() const override { return spec_; }
  Observation Reset(std::uint64_t seed) override;
  StepResult Step(std::span<const int> joint_action) override;
  std::vector<double> AgentObservation(int agent) const override;
  std::vector<double> State() const override;
  ActionMask AvailableActions(int agent) const override;
  int steps() const override { return world_.step; }
  bool done() const override { return done_; }
  bool won() const override { return won_; }

  // Actions of the scripted allied baseline for the current world.
  std::vector<int> HeuristicActions();

  const ScenarioConfig& scenario() const { return scenario_; }
  const World& world() const { return world_; }
  World& mutable_world() { return world_; }
  const TickReport& last_tick() const { return last_tick_; }

 private:
  ScenarioConfig scenario_;
  EnvSpec spec_;
  World world_;
  std::vector<int> last_actions_;
  TickReport last_tick_;
  bool done_ = true;
  bool won_ = false;
};

}  // namespace monomix

#endif  // MONOMIX_MICRO_COMBAT_H_
