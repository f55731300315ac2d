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
#include "monomix/micro_combat.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "monomix/errors.h"
#include "monomix/random.h"

namespace monomix {
namespace {

using namespace combat_action;  // NOLINT

int TypeDim(const ScenarioConfig& s) {
  const auto types = s.distinct_types();
  return types.size() > 1 ? static_cast<int>(types.size()) : 0;
}

void AppendTypeOneHot(const ScenarioConfig& s, UnitType t,
                      std::vector<double>& out) {
  const auto types = s.distinct_types();
  if (types.size() <= 1) return;
  for (UnitType candidate : types) out.push_back(candidate == t ? 1.0 : 0.0);
}

int OtherSlotDim(const ScenarioConfig& s) { return 4 + TypeDim(s); }
int OwnDim(const ScenarioConfig& s) {
  return 1 + (s.has_shields() ? 1 : 0) + TypeDim(s);
}
int UnitStateDim(const ScenarioConfig& s) {
  return 4 + (s.has_shields() ? 1 : 0) + TypeDim(s);
}

const std::vector<UnitState>& TeamUnits(const World& w, Team t) {
  return t == Team::kAlly ? w.allies : w.enemies;
}
std::vector<UnitState>& TeamUnits(World& w, Team t) {
  return t == Team::kAlly ? w.allies : w.enemies;
}

Vec2 MoveTarget(const Vec2& p, int action, double step) {
  switch (action) {
    case kMoveNorth: return {p.x, p.y + step};
    case kMoveSouth: return {p.x, p.y - step};
    case kMoveEast: return {p.x + step, p.y};
    case kMoveWest: return {p.x - step, p.y};
    default: return p;
  }
}

bool InsideMap(const ScenarioConfig& s, const Vec2& p) {
  return p.x >= 0.0 && p.x <= s.map_width && p.y >= 0.0 &&
         p.y <= s.map_height;
}

double ShieldFraction(const ScenarioConfig& s, const UnitState& u) {
  const double cap = s.stats_of(u.unit_type).max_shield;
  return cap > 0.0 ? u.shield / cap : 0.0;
}

// Applies 'damage' shield first; returns the points actually removed.
double ApplyDamage(UnitState& target, double damage) {
  const double from_shield = std::min(target.shield, damage);
  target.shield -= from_shield;
  const double from_health = std::min(target.health, damage - from_shield);
  target.health -= from_health;
  return from_shield + from_health;
}

std::vector<int> FocusController(World& world, const ScenarioConfig& s,
                                 Team team) {
  auto& own = TeamUnits(world, team);
  const auto& opponents =
      TeamUnits(world, team == Team::kAlly ? Team::kEnemy : Team::kAlly);
  std::vector<int> actions(own.size(), kNoop);
  for (std::size_t i = 0; i < own.size(); ++i) {
    UnitState& u = own[i];
    if (!u.alive) continue;
    const int target = u.attack_target;
    if (target < 0 || !opponents[static_cast<std::size_t>(target)].alive) {
      u.attack_target = -1;
      double best = 0.0;
      for (std::size_t j = 0; j < opponents.size(); ++j) {
        if (!opponents[j].alive) continue;
        const double d = Distance(u.position, opponents[j].position);
        if (u.attack_target < 0 || d < best) {
          best = d;
          u.attack_target = static_cast<int>(j);
        }
      }
    }
    if (u.attack_target < 0) {
      actions[i] = kStop;
      continue;
    }
    const UnitState& t = opponents[static_cast<std::size_t>(u.attack_target)];
    if (Distance(u.position, t.position) <= s.shoot_range) {
      actions[i] = kAttackBase + u.attack_target;
      continue;
    }
    const double dx = t.position.x - u.position.x;
    const double dy = t.position.y - u.position.y;
    const int along_x = dx > 0 ? kMoveEast : kMoveWest;
    const int along_y = dy > 0 ? kMoveNorth : kMoveSouth;
    const bool x_first = std::abs(dx) >= std::abs(dy);
    const int primary = x_first ? along_x : along_y;
    const int secondary = x_first ? along_y : along_x;
    const double secondary_gap = x_first ? dy : dx;
    const ActionMask mask =
        UnitAvailableActions(world, s, team, static_cast<int>(i));
    if (mask[static_cast<std::size_t>(primary)]) {
      actions[i] = primary;
    } else if (secondary_gap != 0.0 &&
               mask[static_cast<std::size_t>(secondary)]) {
      actions[i] = secondary;
    } else {
      actions[i] = kStop;
    }
  }
  return actions;
}

void CheckTeamActions(const World& world, const ScenarioConfig& s, Team team,
                      std::span<const int> actions) {
  const auto& units = TeamUnits(world, team);
  if (actions.size() != units.size()) {
    throw ContractError("expected " + std::to_string(units.size()) +
                        " actions, got " + std::to_string(actions.size()));
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    const ActionMask mask =
        UnitAvailableActions(world, s, team, static_cast<int>(i));
    const int a = actions[i];
    if (a < 0 || a >= static_cast<int>(mask.size()) ||
        !mask[static_cast<std::size_t>(a)]) {
      throw ContractError(std::string(team == Team::kAlly ? "ally " : "enemy ") +
                          std::to_string(i) + " chose unavailable action " +
                          std::to_string(a));
    }
  }
}

}  // namespace

double Distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

int CombatActionCount(const ScenarioConfig& s) {
  return kAttackBase + s.team_size();
}

int CombatObservationDim(const ScenarioConfig& s) {
  return OwnDim(s) + (2 * s.team_size() - 1) * OtherSlotDim(s);
}

int CombatStateDim(const ScenarioConfig& s) {
  return 2 * s.team_size() * UnitStateDim(s) +
         s.team_size() * CombatActionCount(s);
}

World SpawnWorld(const ScenarioConfig& s, std::uint64_t seed) {
  Rng rng(seed);
  World world;
  const int n = s.team_size();
  constexpr int kColumn = 4;
  for (int k = 0; k < n; ++k) {
    const int col = k / kColumn;
    const int row = k % kColumn;
    const int in_col = std::min(kColumn, n - col * kColumn);
    const double y = s.map_height / 2.0 +
                     (row - (in_col - 1) / 2.0) * s.unit_spacing;
    const double x =
        s.map_width / 2.0 - s.spawn_gap / 2.0 - col * s.unit_spacing;
    const UnitStats& st = s.stats_of(s.roster[static_cast<std::size_t>(k)]);
    UnitState ally;
    ally.team = Team::kAlly;
    ally.unit_type = s.roster[static_cast<std::size_t>(k)];
    ally.position = {x, y};
    ally.health = st.max_health;
    ally.shield = st.max_shield;
    UnitState enemy = ally;
    enemy.team = Team::kEnemy;
    enemy.position = {s.map_width - x, y};
    world.allies.push_back(ally);
    world.enemies.push_back(enemy);
  }
  for (auto* team : {&world.allies, &world.enemies}) {
    for (UnitState& u : *team) {
      u.position.x += UniformReal(rng, -s.spawn_jitter, s.spawn_jitter);
      u.position.y += UniformReal(rng, -s.spawn_jitter, s.spawn_jitter);
      u.position.x = std::clamp(u.position.x, 0.0, s.map_width);
      u.position.y = std::clamp(u.position.y, 0.0, s.map_height);
    }
  }
  return world;
}

std::vector<double> BuildObservation(const World& world,
                                     const ScenarioConfig& s, int agent) {
  const int n = s.team_size();
  if (agent < 0 || agent >= n) {
    throw ContractError("agent index " + std::to_string(agent) +
                        " out of range");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(CombatObservationDim(s)));
  const UnitState& me = world.allies[static_cast<std::size_t>(agent)];
  if (!me.alive) {
    out.assign(static_cast<std::size_t>(CombatObservationDim(s)), 0.0);
    return out;
  }
  out.push_back(me.health / s.stats_of(me.unit_type).max_health);
  if (s.has_shields()) out.push_back(ShieldFraction(s, me));
  AppendTypeOneHot(s, me.unit_type, out);

  auto slot = [&](const UnitState& other) {
    const double d = Distance(me.position, other.position);
    if (!other.alive || d > s.sight_range) {
      out.insert(out.end(), static_cast<std::size_t>(OtherSlotDim(s)), 0.0);
      return;
    }
    out.push_back(1.0);
    out.push_back(d / s.sight_range);
    out.push_back((other.position.x - me.position.x) / s.sight_range);
    out.push_back((other.position.y - me.position.y) / s.sight_range);
    AppendTypeOneHot(s, other.unit_type, out);
  };
  for (int i = 0; i < n; ++i) {
    if (i != agent) slot(world.allies[static_cast<std::size_t>(i)]);
  }
  for (const UnitState& e : world.enemies) slot(e);
  return out;
}

std::vector<double> BuildState(const World& world, const ScenarioConfig& s,
                               std::span<const int> last_joint_action) {
  const int n = s.team_size();
  const int n_actions = CombatActionCount(s);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(CombatStateDim(s)));
  const double half_w = s.map_width / 2.0;
  const double half_h = s.map_height / 2.0;
  for (const auto* team : {&world.allies, &world.enemies}) {
    for (const UnitState& u : *team) {
      if (!u.alive) {
        out.insert(out.end(), static_cast<std::size_t>(UnitStateDim(s)), 0.0);
        continue;
      }
      const UnitStats& st = s.stats_of(u.unit_type);
      out.push_back((u.position.x - half_w) / half_w);
      out.push_back((u.position.y - half_h) / half_h);
      out.push_back(u.health / st.max_health);
      if (s.has_shields()) out.push_back(ShieldFraction(s, u));
      out.push_back(static_cast<double>(u.cooldown) / st.cooldown);
      AppendTypeOneHot(s, u.unit_type, out);
    }
  }
  if (!last_joint_action.empty() &&
      static_cast<int>(last_joint_action.size()) != n) {
    throw ContractError("last joint action has wrong arity");
  }
  for (int i = 0; i < n; ++i) {
    const int a = last_joint_action.empty()
                      ? -1
                      : last_joint_action[static_cast<std::size_t>(i)];
    for (int k = 0; k < n_actions; ++k) out.push_back(k == a ? 1.0 : 0.0);
  }
  return out;
}

ActionMask UnitAvailableActions(const World& world, const ScenarioConfig& s,
                                Team team, int index) {
  const auto& own = TeamUnits(world, team);
  const auto& opponents =
      TeamUnits(world, team == Team::kAlly ? Team::kEnemy : Team::kAlly);
  ActionMask mask(static_cast<std::size_t>(CombatActionCount(s)), 0);
  const UnitState& u = own.at(static_cast<std::size_t>(index));
  if (!u.alive) {
    mask[kNoop] = 1;
    return mask;
  }
  mask[kStop] = 1;
  for (int a : {kMoveNorth, kMoveSouth, kMoveEast, kMoveWest}) {
    mask[static_cast<std::size_t>(a)] =
        InsideMap(s, MoveTarget(u.position, a, s.move_step)) ? 1 : 0;
  }
  for (std::size_t j = 0; j < opponents.size(); ++j) {
    const UnitState& o = opponents[j];
    if (o.alive && Distance(u.position, o.position) <= s.shoot_range) {
      mask[kAttackBase + j] = 1;
    }
  }
  return mask;
}

std::vector<int> ScriptedEnemyPolicy(World& world, const ScenarioConfig& s) {
  return FocusController(world, s, Team::kEnemy);
}

std::vector<int> HeuristicAllyPolicy(World& world, const ScenarioConfig& s) {
  return FocusController(world, s, Team::kAlly);
}

TickReport ResolveTick(World& world, const ScenarioConfig& s,
                       std::span<const int> ally_actions,
                       std::span<const int> enemy_actions) {
  CheckTeamActions(world, s, Team::kAlly, ally_actions);
  CheckTeamActions(world, s, Team::kEnemy, enemy_actions);
  TickReport report;

  auto points = [](const std::vector<UnitState>& units) {
    double total = 0.0;
    for (const UnitState& u : units) total += u.health + u.shield;
    return total;
  };
  const double enemy_points_before = points(world.enemies);

  struct Shot {
    Team team;
    std::size_t shooter;
    std::size_t target;
  };
  std::vector<Shot> shots;
  for (Team team : {Team::kAlly, Team::kEnemy}) {
    auto& units = TeamUnits(world, team);
    const auto actions = team == Team::kAlly ? ally_actions : enemy_actions;
    for (std::size_t i = 0; i < units.size(); ++i) {
      const int a = actions[i];
      if (a >= kAttackBase) {
        if (units[i].cooldown == 0) {
          shots.push_back({team, i, static_cast<std::size_t>(a - kAttackBase)});
        }
      } else if (a >= kMoveNorth) {
        units[i].position = MoveTarget(units[i].position, a, s.move_step);
      }
    }
  }

  for (const Shot& shot : shots) {
    auto& shooters = TeamUnits(world, shot.team);
    auto& targets = TeamUnits(
        world, shot.team == Team::kAlly ? Team::kEnemy : Team::kAlly);
    UnitState& shooter = shooters[shot.shooter];
    const UnitStats& st = s.stats_of(shooter.unit_type);
    const double dealt = ApplyDamage(targets[shot.target], st.damage);
    shooter.cooldown = st.cooldown;
    if (shot.team == Team::kAlly) {
      report.damage_dealt += dealt;
    } else {
      report.damage_taken += dealt;
    }
  }

  for (auto* team : {&world.allies, &world.enemies}) {
    for (UnitState& u : *team) {
      if (u.cooldown > 0) --u.cooldown;
      if (u.alive && u.health <= 0.0) {
        u.alive = false;
        u.health = 0.0;
        u.shield = 0.0;
        u.cooldown = 0;
        u.attack_target = -1;
        if (u.team == Team::kAlly) {
          ++report.allies_killed;
        } else {
          ++report.enemies_killed;
        }
      }
    }
  }
  report.enemy_points_lost = enemy_points_before - points(world.enemies);
  report.all_enemies_dead =
      std::none_of(world.enemies.begin(), world.enemies.end(),
                   [](const UnitState& u) { return u.alive; });
  report.all_allies_dead =
      std::none_of(world.allies.begin(), world.allies.end(),
                   [](const UnitState& u) { return u.alive; });
  report.raw_reward = report.damage_dealt + 10.0 * report.enemies_killed +
                      (report.all_enemies_dead ? 200.0 : 0.0);
  ++world.step;
  return report;
}

double NormaliseReward(double raw_reward, double max_raw_return) {
  if (max_raw_return <= 0.0) {
    throw ContractError("maximum raw return must be positive");
  }
  return raw_reward * kMaxCombatReturn / max_raw_return;
}

MicroCombatEnv::MicroCombatEnv(ScenarioConfig scenario, double gamma)
    : scenario_(std::move(scenario)) {
  scenario_.Validate();
  spec_.n_agents = scenario_.team_size();
  spec_.n_actions = CombatActionCount(scenario_);
  spec_.obs_dim = CombatObservationDim(scenario_);
  spec_.state_dim = CombatStateDim(scenario_);
  spec_.episode_limit = scenario_.episode_limit;
  spec_.gamma = gamma;
  spec_.Validate();
  Reset(0);
}

Observation MicroCombatEnv::Reset(std::uint64_t seed) {
  world_ = SpawnWorld(scenario_, seed);
  last_actions_.assign(static_cast<std::size_t>(spec_.n_agents), -1);
  last_tick_ = TickReport{};
  done_ = false;
  won_ = false;
  return Observe();
}

StepResult MicroCombatEnv::Step(std::span<const int> joint_action) {
  if (done_) throw ContractError("Step called on a finished episode");
  CheckJointAction(*this, joint_action);
  const std::vector<int> enemy_actions = ScriptedEnemyPolicy(world_, scenario_);
  last_tick_ = ResolveTick(world_, scenario_, joint_action, enemy_actions);
  last_actions_.assign(joint_action.begin(), joint_action.end());

  StepResult result;
  result.reward =
      NormaliseReward(last_tick_.raw_reward, scenario_.MaxRawReturn());
  result.terminated = last_tick_.all_enemies_dead || last_tick_.all_allies_dead;
  result.truncated =
      !result.terminated && world_.step >= scenario_.episode_limit;
  won_ = last_tick_.all_enemies_dead;
  done_ = result.terminated || result.truncated;
  return result;
}

std::vector<double> MicroCombatEnv::AgentObservation(int agent) const {
  return BuildObservation(world_, scenario_, agent);
}

std::vector<double> MicroCombatEnv::State() const {
  return BuildState(world_, scenario_, last_actions_);
}

ActionMask MicroCombatEnv::AvailableActions(int agent) const {
  return UnitAvailableActions(world_, scenario_, Team::kAlly, agent);
}

std::vector<int> MicroCombatEnv::HeuristicActions() {
  return HeuristicAllyPolicy(world_, scenario_);
}

}  // namespace monomix
