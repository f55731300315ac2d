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
#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "monomix/env.h"
#include "monomix/episode.h"
#include "monomix/errors.h"
#include "monomix/two_step_game.h"

namespace monomix {
namespace {

constexpr int kA = TwoStepGame::kActionA;
constexpr int kB = TwoStepGame::kActionB;

double PlayReturn(int first, int a0, int a1) {
  TwoStepGame game;
  game.Reset(0);
  const std::vector<int> step1 = {first, kA};
  const StepResult r1 = game.Step(step1);
  EXPECT_EQ(r1.reward, 0.0);
  EXPECT_FALSE(r1.terminated);
  const std::vector<int> step2 = {a0, a1};
  const StepResult r2 = game.Step(step2);
  EXPECT_TRUE(r2.terminated);
  EXPECT_FALSE(r2.truncated);
  EXPECT_TRUE(game.done());
  EXPECT_EQ(game.steps(), 2);
  return r1.reward + r2.reward;
}

TEST(EnvSpecTest, Validation) {
  EnvSpec spec;
  EXPECT_NO_THROW(spec.Validate());
  spec.gamma = 1.0;
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec.gamma = 0.0;
  EXPECT_NO_THROW(spec.Validate());
  spec.obs_dim = 0;
  EXPECT_THROW(spec.Validate(), ConfigError);
}

TEST(TwoStepGameTest, ResetEncodesStateOne) {
  TwoStepGame game;
  const Observation obs = game.Reset(42);
  EXPECT_EQ(game.phase(), TwoStepGame::Phase::kState1);
  EXPECT_EQ(obs.state, (std::vector<double>{1, 0, 0}));
  ASSERT_EQ(obs.agents.size(), 2u);
  for (const auto& o : obs.agents) {
    EXPECT_EQ(static_cast<int>(o.size()), game.spec().obs_dim);
  }
  EXPECT_EQ(game.Reset(42).agents, game.Reset(42).agents);
}

TEST(TwoStepGameTest, FirstStepTransitionsOnAgentOneOnly) {
  for (int other : {kA, kB}) {
    TwoStepGame game;
    game.Reset(0);
    const std::vector<int> a = {kA, other};
    game.Step(a);
    EXPECT_EQ(game.phase(), TwoStepGame::Phase::kState2A);
    EXPECT_EQ(game.State(), (std::vector<double>{0, 1, 0}));
    game.Reset(0);
    const std::vector<int> b = {kB, other};
    game.Step(b);
    EXPECT_EQ(game.phase(), TwoStepGame::Phase::kState2B);
    EXPECT_EQ(game.State(), (std::vector<double>{0, 0, 1}));
  }
}

TEST(TwoStepGameTest, PayoffTables) {
  for (int a0 : {kA, kB}) {
    for (int a1 : {kA, kB}) EXPECT_EQ(PlayReturn(kA, a0, a1), 7.0);
  }
  EXPECT_EQ(PlayReturn(kB, kB, kB), 8.0);
  EXPECT_EQ(PlayReturn(kB, kA, kA), 0.0);
  EXPECT_EQ(PlayReturn(kB, kA, kB), 1.0);
  EXPECT_EQ(PlayReturn(kB, kB, kA), 1.0);
}

TEST(TwoStepGameTest, OptimumIsUniqueEight) {
  int best_count = 0;
  double best = -1.0;
  bool best_is_bbb = false;
  for (int first : {kA, kB}) {
    for (int other : {kA, kB}) {
      for (int a0 : {kA, kB}) {
        for (int a1 : {kA, kB}) {
          TwoStepGame game;
          game.Reset(0);
          const std::vector<int> s1 = {first, other};
          const std::vector<int> s2 = {a0, a1};
          game.Step(s1);
          const double ret = game.Step(s2).reward;
          if (ret > best) {
            best = ret;
            best_count = 0;
          }
          if (ret == best) {
            ++best_count;
            best_is_bbb = first == kB && a0 == kB && a1 == kB;
          }
        }
      }
    }
  }
  EXPECT_EQ(best, 8.0);
  EXPECT_TRUE(best_is_bbb);
  EXPECT_EQ(best_count, 2);  // agent 2's first action is irrelevant
}

TEST(TwoStepGameTest, MasksAlwaysFull) {
  TwoStepGame game;
  game.Reset(0);
  for (int agent = 0; agent < 2; ++agent) {
    const ActionMask m = game.AvailableActions(agent);
    EXPECT_EQ(static_cast<int>(m.size()), game.spec().n_actions);
    EXPECT_EQ(m, (ActionMask{1, 1}));
  }
}

TEST(TwoStepGameTest, InvalidActionsNameAgentAndAction) {
  TwoStepGame game;
  game.Reset(0);
  const std::vector<int> bad = {0, 5};
  try {
    game.Step(bad);
    FAIL() << "expected ContractError";
  } catch (const ContractError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("agent 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find('5'), std::string::npos) << msg;
  }
  const std::vector<int> short_action = {0};
  EXPECT_THROW(game.Step(short_action), ContractError);
}

TEST(TwoStepGameTest, StepAfterTerminalThrows) {
  TwoStepGame game;
  game.Reset(0);
  const std::vector<int> a = {kB, kB};
  game.Step(a);
  game.Step(a);
  EXPECT_THROW(game.Step(a), ContractError);
}

Episode PlayEpisode(int first, int a0, int a1) {
  TwoStepGame game;
  game.Reset(3);
  EpisodeBuilder builder(game);
  const std::vector<int> s1 = {first, kB};
  builder.AddStep(s1, game.Step(s1), game);
  const std::vector<int> s2 = {a0, a1};
  builder.AddStep(s2, game.Step(s2), game);
  return std::move(builder).Finish();
}

TEST(EpisodeTest, BuilderRecordsEveryStep) {
  const Episode ep = PlayEpisode(kB, kB, kB);
  EXPECT_EQ(ep.length, 2);
  EXPECT_EQ(ep.Return(), 8.0);
  EXPECT_EQ(ep.rewards, (std::vector<double>{0.0, 8.0}));
  EXPECT_EQ(ep.terminated, (std::vector<std::uint8_t>{0, 1}));
  EXPECT_EQ(ep.action(1, 1), kB);
  auto s0 = ep.state_at(0);
  EXPECT_EQ(std::vector<double>(s0.begin(), s0.end()),
            (std::vector<double>{1, 0, 0}));
  auto s1 = ep.state_at(1);
  EXPECT_EQ(std::vector<double>(s1.begin(), s1.end()),
            (std::vector<double>{0, 0, 1}));
}

TEST(EpisodeTest, ReplayingActionsReproducesRewards) {
  const Episode ep = PlayEpisode(kA, kB, kA);
  TwoStepGame game;
  game.Reset(3);
  for (int t = 0; t < ep.length; ++t) {
    const std::vector<int> a = {ep.action(t, 0), ep.action(t, 1)};
    EXPECT_EQ(game.Step(a).reward, ep.rewards[t]);
  }
}

TEST(EpisodeTest, TraceRoundTrip) {
  const Episode ep = PlayEpisode(kB, kA, kB);
  std::stringstream buf;
  WriteTrace(buf, ep);
  int lines = 0;
  for (std::string line; std::getline(buf, line);) ++lines;
  EXPECT_EQ(lines, 1 + ep.length + 1);
  buf.clear();
  buf.seekg(0);
  EXPECT_EQ(ReadTrace(buf), ep);
}

TEST(EpisodeTest, MalformedTraceRejected) {
  std::stringstream empty;
  EXPECT_THROW(ReadTrace(empty), FormatError);
  std::stringstream junk("{not json}\n");
  EXPECT_THROW(ReadTrace(junk), FormatError);
}

}  // namespace
}  // namespace monomix
