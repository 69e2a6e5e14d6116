#include <gtest/gtest.h>

#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tlink/rl/env.hpp"
#include "tlink/rl/protocol.hpp"

using namespace tlink;
using namespace tlink::rl;
using nlohmann::json;

namespace {

int mask_count(const std::vector<double>& obs) {
  int n = 0;
  for (int i = 0; i < kActionCount; ++i) n += obs[kMaskOffset + i] == 1.0;
  return n;
}

int plane_count(const std::vector<double>& obs, int plane) {
  return static_cast<int>(std::count(obs.begin() + plane * kPlaneSize, obs.begin() + (plane + 1) * kPlaneSize, 1.0));
}

int random_masked_action(const std::vector<double>& obs, Rng& rng) {
  std::vector<int> legal;
  for (int i = 0; i < kActionCount; ++i) {
    if (obs[kMaskOffset + i] == 1.0) legal.push_back(i);
  }
  return legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)];
}

}  // namespace

TEST(ObservationTest, LayoutOnReset) {
  EXPECT_EQ(kObservationSize, 602);
  TetrisLinkEnv env;
  const auto obs = env.reset(1, nullptr, true);
  ASSERT_EQ(obs.size(), 602u);
  EXPECT_EQ(plane_count(obs, 0) + plane_count(obs, 1), 0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(obs[kInventoryOffset + i], 1.0);
  EXPECT_EQ(obs[kScoreOffset], 0.0);
  EXPECT_EQ(mask_count(obs), 162);
}

TEST(ObservationTest, OpponentFirstPlacesOnePiece) {
  TetrisLinkEnv env;
  const auto obs = env.reset(1, nullptr, false);
  EXPECT_EQ(plane_count(obs, 0), 0);
  EXPECT_EQ(plane_count(obs, 1), 4);
  EXPECT_EQ(env.agent_player(), 1);
  double opp_inventory = 0;
  for (int i = 0; i < 5; ++i) opp_inventory += obs[kInventoryOffset + 5 + i];
  EXPECT_DOUBLE_EQ(opp_inventory, 4.8);
}

TEST(ObservationTest, DeterministicForSeed) {
  TetrisLinkEnv a, b;
  EXPECT_EQ(a.reset(9, nullptr, false), b.reset(9, nullptr, false));
  Rng ra(1), rb(1);
  for (int i = 0; i < 20 && !a.done(); ++i) {
    const int act = random_masked_action(a.observation(), ra);
    EXPECT_EQ(a.step(act).observation, b.step(random_masked_action(b.observation(), rb)).observation);
  }
}

TEST(ObservationTest, CellIndexingBottomRowFirst) {
  GameState s;
  s.apply(Move{2, 0});  // O in the corner for player 0
  const auto obs = observe(s, 0);
  EXPECT_EQ(obs[0], 1.0);
  EXPECT_EQ(obs[1], 1.0);
  EXPECT_EQ(obs[10], 1.0);
  EXPECT_EQ(obs[11], 1.0);
  const auto theirs = observe(s, 1);
  EXPECT_EQ(theirs[kPlaneSize + 11], 1.0);
  EXPECT_EQ(mask_count(obs), 0);  // not player 0's turn
}

TEST(EnvTest, MaskMatchesLegalMovesAndNeverIllegal) {
  for (int ep = 0; ep < 200; ++ep) {
    TetrisLinkEnv env;
    env.reset(ep, nullptr, ep % 2 == 0);
    Rng rng(ep);
    int steps = 0;
    while (!env.done()) {
      const auto obs = env.observation();
      ASSERT_EQ(mask_count(obs), static_cast<int>(env.state().legal_moves().size()));
      const auto r = env.step(random_masked_action(obs, rng));
      ASSERT_FALSE(r.info.illegal_attempt);
      ASSERT_EQ(r.info.legal_count, mask_count(r.observation));
      ++steps;
    }
    EXPECT_LE(steps, 25);
  }
}

TEST(RewardTest, GuidedTelescopes) {
  for (int ep = 0; ep < 200; ++ep) {
    TetrisLinkEnv env({RewardKind::kGuided});
    env.reset(ep, std::make_unique<RandomAgent>(), ep % 2 == 1);
    Rng rng(ep + 1000);
    double total = 0;
    StepResult last;
    while (!env.done()) {
      last = env.step(random_masked_action(env.observation(), rng));
      total += last.reward;
    }
    EXPECT_NEAR(total, (last.info.score + last.info.group_size) / 100.0, 1e-9);
  }
}

TEST(RewardTest, GuidedArithmetic) {
  TetrisLinkEnv env({RewardKind::kGuided});
  env.reset(3, nullptr, true);
  Rng rng(3);
  int score = 0, group = 0;
  while (!env.done()) {
    const auto r = env.step(random_masked_action(env.observation(), rng));
    EXPECT_NEAR(r.reward, ((r.info.score - score) + (r.info.group_size - group)) / 100.0, 1e-12);
    score = r.info.score;
    group = r.info.group_size;
  }
}

TEST(RewardTest, ScoreIsDelta) {
  for (int ep = 0; ep < 50; ++ep) {
    TetrisLinkEnv env({RewardKind::kScore});
    env.reset(ep, nullptr, true);
    Rng rng(ep);
    int score = 0;
    bool saw_three = false;
    while (!env.done()) {
      const auto r = env.step(random_masked_action(env.observation(), rng));
      EXPECT_NEAR(r.reward, (r.info.score - score) / 100.0, 1e-12);
      if (score == 0 && r.info.score == 3) {
        EXPECT_NEAR(r.reward, 0.03, 1e-12);
        saw_three = true;
      }
      score = r.info.score;
    }
    (void)saw_three;
  }
}

TEST(RewardTest, AbsoluteModeEmitsLevel) {
  TetrisLinkEnv env({RewardKind::kScore, false});
  env.reset(4, nullptr, true);
  Rng rng(4);
  while (!env.done()) {
    const auto r = env.step(random_masked_action(env.observation(), rng));
    EXPECT_NEAR(r.reward, r.info.score / 100.0, 1e-12);
  }
}

TEST(RewardTest, SimpleOnlyAtTerminal) {
  int decisive = 0;
  for (int ep = 0; ep < 200; ++ep) {
    TetrisLinkEnv env({RewardKind::kSimple});
    env.reset(ep, nullptr, ep % 2 == 0);
    Rng rng(ep);
    StepResult r;
    while (!env.done()) {
      r = env.step(random_masked_action(env.observation(), rng));
      if (!r.done) {
        ASSERT_EQ(r.reward, 0.0);
      }
    }
    const auto values = outcome_values(env.state());
    const int me = env.agent_player();
    const double expected = values[me] == 1.0 ? 1.0 : values[me] == 0.0 ? -1.0 : 0.0;
    EXPECT_EQ(r.reward, expected);
    // Zero sum: the opponent's view of the same result.
    const double theirs = values[1 - me] == 1.0 ? 1.0 : values[1 - me] == 0.0 ? -1.0 : 0.0;
    EXPECT_EQ(r.reward + theirs, 0.0);
    decisive += r.reward != 0.0;
  }
  EXPECT_GT(decisive, 100);
}

TEST(RewardTest, HeuristicModeUsesScoreDifference) {
  for (int ep = 0; ep < 50; ++ep) {
    TetrisLinkEnv env({RewardKind::kHeuristic});
    env.reset(ep, std::make_unique<heuristic::HeuristicAgent>("user", heuristic::kUserWeights), true);
    Rng rng(ep);
    double total = 0;
    while (!env.done()) {
      std::array<double, 4> w{};
      for (auto& x : w) x = std::uniform_real_distribution<double>(-5, 20)(rng);
      total += env.step_weights(w).reward;
    }
    const auto& pos = env.state().position();
    const int me = env.agent_player();
    EXPECT_NEAR(total, ((pos.score(me).total - pos.score(1 - me).total) + pos.connected_pieces(me)) / 100.0,
                1e-9);
  }
  EXPECT_EQ(clamp_weights({-1, 3, 99, 15}), (heuristic::Weights{0, 3, 15, 15}));
  EXPECT_THROW(clamp_weights({std::nan(""), 0, 0, 0}), GameError);
}

TEST(EnvTest, IllegalAttemptIsScoldedAndFrozen) {
  TetrisLinkEnv env({RewardKind::kGuided});
  env.reset(2, nullptr, true);
  const auto before = env.observation();
  const int history = static_cast<int>(env.state().history().size());
  const auto r = env.step(Move{2, 9}.action());  // O does not fit at column 9
  EXPECT_TRUE(r.info.illegal_attempt);
  EXPECT_DOUBLE_EQ(r.reward, -0.1);
  EXPECT_EQ(r.observation, before);
  EXPECT_EQ(static_cast<int>(env.state().history().size()), history);
  TetrisLinkEnv simple({RewardKind::kSimple});
  simple.reset(2, nullptr, true);
  EXPECT_EQ(simple.step(Move{2, 9}.action()).reward, 0.0);
}

TEST(EnvTest, Errors) {
  TetrisLinkEnv env;
  EXPECT_THROW(env.step(0), GameError);
  env.reset(1, nullptr, true);
  EXPECT_THROW(env.step(190), GameError);
  EXPECT_THROW(env.step(-1), GameError);
  Rng rng(1);
  while (!env.done()) env.step(random_masked_action(env.observation(), rng));
  try {
    env.step(0);
    FAIL();
  } catch (const GameError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEpisodeFinished);
  }
}

TEST(ProtocolTest, SessionReplies) {
  EnvSession s;
  auto reply = json::parse(s.handle(R"({"cmd":"step","action":1})"));
  EXPECT_FALSE(reply["ok"]);
  reply = json::parse(s.handle(R"({"cmd":"reset","seed":1,"opponent":"random","reward":"guided","agentFirst":true})"));
  ASSERT_TRUE(reply["ok"]);
  EXPECT_EQ(reply["obs"].size(), 602u);
  EXPECT_EQ(reply["done"], false);
  reply = json::parse(s.handle(R"({"cmd":"step","action":500})"));
  EXPECT_FALSE(reply["ok"]);
  EXPECT_EQ(reply["error"], "action out of range");
  reply = json::parse(s.handle("{nope"));
  EXPECT_FALSE(reply["ok"]);
  reply = json::parse(s.handle(R"({"cmd":"fly"})"));
  EXPECT_FALSE(reply["ok"]);
  reply = json::parse(s.handle(R"({"cmd":"reset","opponent":"nobody"})"));
  EXPECT_FALSE(reply["ok"]);
  reply = json::parse(s.handle(R"({"cmd":"step","action":0})"));
  EXPECT_TRUE(reply["ok"]);
  EXPECT_EQ(reply["info"]["illegalAttempt"], false);
  reply = json::parse(s.handle(R"({"cmd":"step","weights":[1,2,3]})"));
  EXPECT_FALSE(reply["ok"]);
  reply = json::parse(s.handle(R"({"cmd":"step","weights":[1,2,3,4]})"));
  EXPECT_TRUE(reply["ok"]);
  EXPECT_FALSE(s.closed());
  reply = json::parse(s.handle(R"({"cmd":"close"})"));
  EXPECT_TRUE(reply["ok"]);
  EXPECT_TRUE(s.closed());
}

TEST(ProtocolTest, StreamTransport) {
  std::istringstream in(
      "{\"cmd\":\"reset\",\"seed\":4}\n{\"cmd\":\"step\",\"action\":0}\n{\"cmd\":\"close\"}\n"
      "{\"cmd\":\"step\",\"action\":0}\n");
  std::ostringstream out;
  serve_stream(in, out);
  std::istringstream replies(out.str());
  std::string line;
  int n = 0;
  while (std::getline(replies, line)) {
    EXPECT_TRUE(json::parse(line)["ok"]);
    ++n;
  }
  EXPECT_EQ(n, 3);  // nothing served after close
}

TEST(ProtocolTest, TcpSoakTenThousandSteps) {
  TcpEnvServer server(0);
  std::thread loop([&] { server.run(); });
  int requests = 0, replies = 0, desyncs = 0, steps = 0;
  {
    LineClient client("127.0.0.1", server.port());
    Rng rng(17);
    for (int ep = 0; steps < 10000; ++ep) {
      const bool first = ep % 2 == 0;
      TetrisLinkEnv mirror;
      const auto local = mirror.reset(ep, std::make_unique<RandomAgent>(), first);
      json req = {{"cmd", "reset"}, {"seed", ep}, {"opponent", "random"}, {"reward", "guided"}, {"agentFirst", first}};
      ++requests;
      auto reply = json::parse(client.request(req.dump()));
      ++replies;
      if (!reply["ok"] || reply["obs"].get<std::vector<double>>() != local) ++desyncs;
      while (!mirror.done() && steps < 10000) {
        const int action = random_masked_action(mirror.observation(), rng);
        const auto expected = mirror.step(action);
        ++requests;
        reply = json::parse(client.request(json{{"cmd", "step"}, {"action", action}}.dump()));
        ++replies;
        ++steps;
        if (!reply["ok"] || reply["obs"].get<std::vector<double>>() != expected.observation ||
            reply["reward"].get<double>() != expected.reward || reply["done"].get<bool>() != expected.done) {
          ++desyncs;
        }
      }
    }
    ++requests;
    EXPECT_TRUE(json::parse(client.request(R"({"cmd":"close"})"))["ok"]);
    ++replies;
  }
  server.stop();
  loop.join();
  EXPECT_EQ(steps, 10000);
  EXPECT_EQ(requests, replies);
  EXPECT_EQ(desyncs, 0);
}
