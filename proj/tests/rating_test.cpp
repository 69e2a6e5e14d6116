#include <gtest/gtest.h>

#include "json.hpp"
#include "tlink/agents/registry.hpp"
#include "tlink/heuristic/heuristic.hpp"
#include "tlink/rating/rating.hpp"

using namespace tlink;
using namespace tlink::rating;

namespace {

// Fresh ratings at the defaults, A wins: c = sqrt(500^2 + 500^2 + 2 * 250^2)
// = sqrt(625000), delta = 500^2 / c * 0.5.
constexpr double kFreshWinDelta = 158.11388300841898;

Entrant entrant(const std::string& spec) {
  return {spec, [spec] { return agents::make_agent(spec); }};
}

}  // namespace

TEST(BbtTest, EqualRatingsAreEven) {
  const Rating r{1500, 500};
  EXPECT_EQ(win_probability(r, r), 0.5);
  const Rating s{1234, 80};
  EXPECT_EQ(win_probability(s, s), 0.5);
}

TEST(BbtTest, SymmetricUpdate) {
  const Rating r{1500, 500};
  auto [a, b] = bbt_update(r, r, MatchResult::kAWins);
  EXPECT_GT(a.mu - 1500, 0);
  EXPECT_DOUBLE_EQ(a.mu - 1500, 1500 - b.mu);
  EXPECT_LT(a.sigma, 500);
  EXPECT_LT(b.sigma, 500);
  EXPECT_DOUBLE_EQ(a.sigma, b.sigma);
  auto [c, d] = bbt_update(r, r, MatchResult::kDraw);
  EXPECT_DOUBLE_EQ(c.mu, 1500);
  EXPECT_DOUBLE_EQ(d.mu, 1500);
}

TEST(BbtTest, FrozenFreshWinConstant) {
  const double c = std::sqrt(500.0 * 500 + 500.0 * 500 + 2 * 250.0 * 250);
  EXPECT_DOUBLE_EQ(500.0 * 500 / c * 0.5, kFreshWinDelta);
  auto [a, b] = bbt_update({1500, 500}, {1500, 500}, MatchResult::kAWins);
  EXPECT_NEAR(a.mu - 1500, kFreshWinDelta, 1e-9);
  EXPECT_NEAR(1500 - b.mu, kFreshWinDelta, 1e-9);
  EXPECT_NEAR(a.sigma, std::sqrt(250000.0 * 0.9), 1e-9);
}

TEST(BbtTest, ProbabilitiesAndSigmaMonotone) {
  Rng rng(1);
  std::uniform_real_distribution<double> mu(0, 3000), sg(1, 600);
  double prev = 0;
  for (int d = -2000; d <= 2000; d += 100) {
    const double p = win_probability({1500.0 + d, 200}, {1500, 200});
    EXPECT_GT(p, prev);
    prev = p;
  }
  for (int i = 0; i < 1000; ++i) {
    const Rating a{mu(rng), sg(rng)}, b{mu(rng), sg(rng)};
    EXPECT_DOUBLE_EQ(win_probability(a, b) + win_probability(b, a), 1.0);
    for (auto res : {MatchResult::kAWins, MatchResult::kBWins, MatchResult::kDraw}) {
      auto [na, nb] = bbt_update(a, b, res);
      EXPECT_LE(na.sigma, a.sigma);
      EXPECT_LE(nb.sigma, b.sigma);
      EXPECT_GT(na.sigma, 0);
    }
  }
}

TEST(TournamentTest, ZeroGamesKeepsPriors) {
  const auto r = run_tournament({entrant("random"), entrant("first")}, 0, {}, 1);
  EXPECT_TRUE(r.matches.empty());
  for (const auto& x : r.ratings) {
    EXPECT_EQ(x.mu, 1500);
    EXPECT_EQ(x.sigma, 500);
  }
}

TEST(TournamentTest, ThreeAgentsTenGamesPerPair) {
  const auto r = run_tournament({entrant("random"), entrant("first"), entrant("user")}, 10, {}, 7);
  EXPECT_EQ(r.matches.size(), 30u);
  int total = 0;
  for (const auto& p : r.pairs) total += p.wins + p.draws + p.losses;
  EXPECT_EQ(total, 30);
  for (const auto& x : r.ratings) {
    EXPECT_GT(x.mu, 0);
    EXPECT_LT(x.mu, 3000);
  }
  for (const auto& s : r.scores) EXPECT_EQ(s.samples.size(), 20u);
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j["matches"].size(), 30u);
  EXPECT_EQ(j["agents"][2]["name"], "user");
  EXPECT_NE(pair_table(r).find("random,first,"), std::string::npos);
}

TEST(TournamentTest, ReproducibleAcrossThreads) {
  const std::vector<Entrant> es{entrant("random"), entrant("user")};
  const auto a = run_tournament(es, 12, {}, 3, 1);
  const auto b = run_tournament(es, 12, {}, 3, 4);
  for (int i = 0; i < 2; ++i) EXPECT_EQ(a.ratings[i].mu, b.ratings[i].mu);
}

TEST(TournamentTest, HeuristicOutratesFirstMove) {
  const auto r = run_tournament({entrant("first"), entrant("user")}, 100, {}, 11);
  EXPECT_GT(r.pairs[0].losses, r.pairs[0].wins);
  EXPECT_GT(r.ratings[1].mu, r.ratings[0].mu);
  EXPECT_GE(r.scores[1].max, 8);
}

TEST(RegistryTest, KnownAndUnknownNames) {
  for (const char* n : {"random", "first", "user", "random-heuristic", "mcts-uct", "mcts-rave", "mcts-poolrave",
                        "mcts-heuristic"}) {
    EXPECT_NO_THROW(agents::make_agent(n)) << n;
  }
  EXPECT_THROW(agents::make_agent("nope"), GameError);
  EXPECT_THROW(agents::make_agent("heuristic"), GameError);
  EXPECT_THROW(agents::make_agent("heuristic:/does/not/exist.json"), GameError);
  EXPECT_THROW(agents::parse_variant("x"), GameError);
  auto user = agents::make_agent("user");
  auto* h = dynamic_cast<heuristic::HeuristicAgent*>(user.get());
  ASSERT_NE(h, nullptr);
  EXPECT_EQ(*h->weights(), heuristic::kUserWeights);
}
