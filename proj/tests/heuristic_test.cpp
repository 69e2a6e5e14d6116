#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

#include "test_util.hpp"
#include "tlink/heuristic/heuristic.hpp"
#include "tlink/heuristic/tuner.hpp"

using namespace tlink;
using namespace tlink::heuristic;
using tlink::testing::play;
using tlink::testing::random_state;
using tlink::testing::square_o;
using tlink::testing::vertical_i;

namespace {

// Cell-by-cell recount of the two board features.
FeatureVector scan_features(const Position& pos, int player) {
  const Board& b = pos.board();
  auto own = [&](int c, int r) { return b.piece_at(c, r) >= 0 && b.owner(c, r) == player; };
  auto opp = [&](int c, int r) { return b.piece_at(c, r) >= 0 && b.owner(c, r) != player; };
  auto inside = [](int c, int r) { return c >= 0 && c < kBoardWidth && r >= 0 && r < kBoardHeight; };
  const int dc[4] = {1, -1, 0, 0};
  const int dr[4] = {0, 0, 1, -1};
  FeatureVector f;
  for (int c = 0; c < kBoardWidth; ++c) {
    for (int r = 0; r < kBoardHeight; ++r) {
      if (b.piece_at(c, r) < 0) {
        bool touches = false;
        for (int k = 0; k < 4; ++k) {
          if (inside(c + dc[k], r + dr[k]) && own(c + dc[k], r + dr[k])) touches = true;
        }
        f.connectable_edges += touches;
      } else if (own(c, r)) {
        for (int k = 0; k < 4; ++k) {
          if (inside(c + dc[k], r + dr[k]) && opp(c + dc[k], r + dr[k])) ++f.blocked_edges;
        }
      }
    }
  }
  f.group_size = pos.connected_pieces(player);
  f.player_score = pos.score(player).total;
  return f;
}

}  // namespace

TEST(FeaturesTest, EmptyBoardIsZero) {
  EXPECT_EQ(features(GameState(), 0), FeatureVector{});
}

TEST(FeaturesTest, SquareInCornerHasFourFreeNeighbours) {
  const auto s = play({{square_o(), 0}});
  EXPECT_EQ(features(s, 0).connectable_edges, 4);
  EXPECT_EQ(features(s, 1).connectable_edges, 0);
  const auto mid = play({{square_o(), 4}});
  EXPECT_EQ(features(mid, 0).connectable_edges, 6);
}

TEST(FeaturesTest, TwoTouchingPieces) {
  // Player 0 stacks two squares; player 1 plays elsewhere in between.
  const auto s = play({{square_o(), 0}, {vertical_i(), 9}, {square_o(), 0}});
  const auto f = features(s, 0);
  EXPECT_EQ(f.group_size, 2);
  EXPECT_EQ(f.player_score, 0);
  EXPECT_EQ(f.blocked_edges, 0);
}

TEST(FeaturesTest, BlockedEdgesCountContacts) {
  const auto s = play({{square_o(), 0}, {square_o(), 2}});
  EXPECT_EQ(features(s, 0).blocked_edges, 2);
  EXPECT_EQ(features(s, 1).blocked_edges, 2);
}

TEST(FeaturesTest, MatchCellScanOnRandomStates) {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto s = random_state(rng, static_cast<int>(rng() % 50));
    for (int p = 0; p < 2; ++p) ASSERT_EQ(features(s, p), scan_features(s.position(), p)) << i;
  }
}

TEST(EvaluateTest, ZeroWeightsAndProjection) {
  const FeatureVector f{3, 5, 7, 11};
  EXPECT_EQ(evaluate(f, {}), 0.0);
  EXPECT_EQ(evaluate(f, {1, 0, 0, 0}), 3.0);
  EXPECT_EQ(evaluate(f, {0, 1, 0, 0}), 5.0);
  EXPECT_EQ(evaluate(f, {0, 0, 1, 0}), 7.0);
  EXPECT_EQ(evaluate(f, {0, 0, 0, 1}), 11.0);
}

TEST(EvaluateTest, LinearInWeights) {
  Rng rng(3);
  const FeatureVector f{9, 4, -2, 6};
  for (int i = 0; i < 100; ++i) {
    const Weights a = random_weights(rng), b = random_weights(rng);
    EXPECT_NEAR(evaluate(f, a + b), evaluate(f, a) + evaluate(f, b), 1e-9);
    EXPECT_NEAR(evaluate(f, a.scaled(2.5)), 2.5 * evaluate(f, a), 1e-9);
  }
}

TEST(ChooseMoveTest, OnlyLegalMoveIsChosen) {
  Rng rng(1);
  RandomAgent agent;
  int checked = 0;
  for (int g = 0; g < 500 && checked < 20; ++g) {
    GameState s;
    while (!s.finished()) {
      const auto legal = s.legal_moves();
      if (legal.size() == 1) {
        EXPECT_EQ(choose_move(s, kUserWeights, rng), legal.front());
        ++checked;
      }
      s.apply(agent.choose(s, rng));
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(ChooseMoveTest, ZeroWeightsCoverAllLegalMoves) {
  const GameState s;
  Rng rng(5);
  std::set<int> seen;
  for (int i = 0; i < 5000; ++i) seen.insert(choose_move(s, {}, rng).action());
  EXPECT_EQ(seen.size(), 162u);
  EXPECT_EQ(best_moves(s, {}).size(), 162u);
}

TEST(ChooseMoveTest, SameSeedSameMove) {
  Rng a(77), b(77);
  Rng pos(2);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_state(pos, 20);
    if (s.finished()) continue;
    EXPECT_EQ(choose_move(s, kUserWeights, a), choose_move(s, kUserWeights, b));
  }
}

TEST(ChooseMoveTest, AlwaysLegalAndNoMovesThrows) {
  Rng rng(9);
  HeuristicAgent agent("h", kUserWeights);
  GameState s;
  while (!s.finished()) {
    const Move m = agent.choose(s, rng);
    ASSERT_TRUE(s.is_legal(m));
    s.apply(m);
  }
  try {
    choose_move(s, kUserWeights, rng);
    FAIL();
  } catch (const GameError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoLegalMoves);
  }
}

TEST(ChooseMoveTest, ArgmaxInvariantUnderPositiveScaling) {
  Rng rng(21);
  for (int i = 0; i < 40; ++i) {
    const auto s = random_state(rng, static_cast<int>(rng() % 30));
    if (s.finished()) continue;
    const Weights w = random_weights(rng);
    EXPECT_EQ(best_moves(s, w), best_moves(s, w.scaled(4.0)));
  }
}

TEST(RandomWeightsTest, UniformOnRange) {
  Rng rng(123);
  double sum = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Weights w = random_weights(rng);
    ASSERT_TRUE(w.valid());
    sum += w.edges + w.group + w.score + w.block;
  }
  EXPECT_NEAR(sum / (4.0 * n), 7.5, 0.3);
  Rng a(1), b(2);
  EXPECT_NE(random_weights(a), random_weights(b));
  EXPECT_FALSE((Weights{16, 0, 0, 0}.valid()));
  EXPECT_FALSE((Weights{-1, 0, 0, 0}.valid()));
}

TEST(RandomHeuristicTest, DrawsFreshWeights) {
  auto agent = HeuristicAgent::random_weighted();
  EXPECT_FALSE(agent.weights().has_value());
  Rng rng(4);
  GameState s;
  s.apply(agent.choose(s, rng));
  EXPECT_EQ(s.turn(), 1);
}

TEST(UserHeuristicTest, SelfPlayGamesLastOverForty) {
  HeuristicAgent a("user", kUserWeights), b("user", kUserWeights);
  Agent* seats[2] = {&a, &b};
  double total = 0;
  const int games = 300;
  for (int g = 0; g < games; ++g) {
    Rng rng = split_rng(99, g);
    total += play_match(seats, rng).turn();
  }
  EXPECT_GT(total / games, 40.0);
}

TEST(TunerTest, BudgetOneReturnsTheSample) {
  TunerConfig cfg;
  cfg.budget = 1;
  cfg.games_per_eval = 2;
  cfg.seed = 8;
  Rng sampler = split_rng(8, 0);
  const Weights expected = random_weights(sampler);
  const auto r = tune_weights(kUserWeights, cfg);
  EXPECT_EQ(r.best, expected);
  EXPECT_EQ(r.rounds.size(), 1u);
}

TEST(TunerTest, ReproducibleAndThreadIndependent) {
  TunerConfig cfg;
  cfg.budget = 6;
  cfg.games_per_eval = 2;
  cfg.seed = 4;
  const auto a = tune_weights(kUserWeights, cfg);
  cfg.threads = 3;
  const auto b = tune_weights(kUserWeights, cfg);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.best_fitness, b.best_fitness);
  EXPECT_EQ(a.rounds.size(), 4u);  // 6, 3, 2, 1 survivors
  EXPECT_EQ(a.rounds.back().front().games, 16);
}

TEST(TunerTest, BeatsZeroWeightOpponent) {
  TunerConfig cfg;
  cfg.budget = 8;
  cfg.games_per_eval = 4;
  cfg.seed = 2;
  const auto r = tune_weights({}, cfg);
  EXPECT_GE(win_rate(r.best, {}, 100, 555), 0.7);
}

TEST(WinRateTest, SelfPlayIsNearHalf) {
  EXPECT_NEAR(win_rate(kUserWeights, kUserWeights, 400, 1), 0.5, 0.1);
}

TEST(ProfileTest, RoundTripAndValidation) {
  const Profile p{"tuned", {1.5, 2.25, 14.0, 0.0}};
  const auto back = profile_from_json(profile_to_json(p));
  EXPECT_EQ(back.name, "tuned");
  EXPECT_EQ(back.weights, p.weights);
  const auto path = std::filesystem::temp_directory_path() / "tlink_profile_test.json";
  save_profile(path.string(), p);
  EXPECT_EQ(load_profile(path.string()).weights, p.weights);
  std::filesystem::remove(path);
  EXPECT_THROW(profile_from_json(R"({"wEdges":20,"wGroup":0,"wScore":0,"wBlock":0})"), GameError);
  EXPECT_THROW(profile_from_json(R"({"wEdges":1})"), GameError);
  EXPECT_THROW(profile_from_json("not json"), GameError);
}

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, 4, [&](int i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
}
