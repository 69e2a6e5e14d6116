#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tlink/engine/agent.hpp"

namespace tlink::rating {

struct Rating {
  double mu = 1500.0;
  double sigma = 500.0;
};

struct BbtConfig {
  double mu0 = 1500.0;
  double sigma0 = 500.0;
  double beta = 250.0;
  double kappa = 1e-4;  // floor on the variance shrink factor
  Rating initial() const { return {mu0, sigma0}; }
};

enum class MatchResult { kAWins, kBWins, kDraw };

// Logistic win probability of a over b.
double win_probability(const Rating& a, const Rating& b, const BbtConfig& cfg = {});

// Two-player Bayesian Bradley-Terry update.
std::pair<Rating, Rating> bbt_update(const Rating& a, const Rating& b, MatchResult result,
                                     const BbtConfig& cfg = {});

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

struct Entrant {
  std::string name;
  AgentFactory make;
};

struct MatchRecord {
  int a = 0, b = 0;       // entrant indices; a moved first
  int score_a = 0, score_b = 0;
  MatchResult result = MatchResult::kDraw;
};

struct PairRecord {
  int a = 0, b = 0;
  int wins = 0, draws = 0, losses = 0;  // from a's side
};

struct ScoreSummary {
  int min = 0, max = 0;
  double mean = 0;
  std::vector<int> samples;
};

struct TournamentReport {
  std::vector<std::string> names;
  std::vector<Rating> ratings;
  std::vector<PairRecord> pairs;
  std::vector<ScoreSummary> scores;
  std::vector<MatchRecord> matches;
};

// Round robin: each unordered pair plays games_per_pair matches, the first
// mover alternating. Matches may run on `threads` workers (match k uses
// split_rng(seed, k)); ratings are updated serially in schedule order.
TournamentReport run_tournament(const std::vector<Entrant>& entrants, int games_per_pair,
                                const BbtConfig& cfg, std::uint64_t seed, int threads = 1);

std::string report_json(const TournamentReport& report);
// agentA,agentB,wins,draws,losses
std::string pair_table(const TournamentReport& report);

}  // namespace tlink::rating
