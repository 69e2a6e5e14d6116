#include "tlink/analysis/analysis.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "tlink/engine/board.hpp"
#include "tlink/heuristic/tuner.hpp"

namespace tlink::analysis {

namespace {

struct Played {
  std::vector<int> branching;  // legal move count before each placement
  std::vector<int> sequence;   // action per history entry, -1 for skips
  std::vector<double> outcome;
};

Played self_play(const AgentFactory& factory, Rng& rng) {
  auto a = factory();
  auto b = factory();
  Played out;
  GameState s(2);
  Agent* seats[2] = {a.get(), b.get()};
  std::vector<Move> legal;
  while (!s.finished()) {
    s.legal_moves(legal);
    out.branching.push_back(static_cast<int>(legal.size()));
    s.apply(seats[s.current()]->choose(s, rng));
  }
  for (const auto& e : s.history()) out.sequence.push_back(e.skip ? -1 : e.move.action());
  out.outcome = outcome_values(s);
  return out;
}

std::vector<Played> run_games(const AgentFactory& factory, int games, std::uint64_t seed, int threads) {
  if (games < 1) throw GameError(ErrorCode::kInvalidArgument, "need at least one game");
  std::vector<Played> results(games);
  heuristic::parallel_for(games, threads, [&](int g) {
    Rng rng = split_rng(seed, static_cast<std::uint64_t>(g));
    results[g] = self_play(factory, rng);
  });
  return results;
}

}  // namespace

BranchingProfile branching_profile(const AgentFactory& agent, int games, std::uint64_t seed, int threads) {
  const auto results = run_games(agent, games, seed, threads);
  BranchingProfile p;
  p.games = games;
  std::size_t longest = 0;
  double total = 0;
  for (const auto& r : results) {
    longest = std::max(longest, r.branching.size());
    total += static_cast<double>(r.branching.size());
    p.lengths.push_back(static_cast<int>(r.branching.size()));
  }
  p.mean_length = total / games;
  for (std::size_t t = 0; t < longest; ++t) {
    TurnStats ts;
    ts.turn = static_cast<int>(t) + 1;
    double sum = 0, sq = 0;
    for (const auto& r : results) {
      if (t >= r.branching.size()) continue;
      ++ts.games;
      sum += r.branching[t];
      sq += static_cast<double>(r.branching[t]) * r.branching[t];
    }
    ts.mean = sum / ts.games;
    ts.stddev = std::sqrt(std::max(0.0, sq / ts.games - ts.mean * ts.mean));
    ts.mean_with_ended = sum / games;
    p.turns.push_back(ts);
  }
  return p;
}

std::string profile_table(const BranchingProfile& profile) {
  std::ostringstream out;
  out << "turn,games,mean,stddev,meanWithEnded\n";
  for (const auto& t : profile.turns) {
    out << t.turn << ',' << t.games << ',' << t.mean << ',' << t.stddev << ',' << t.mean_with_ended << '\n';
  }
  return out.str();
}

FirstMoveResult first_move_advantage(const AgentFactory& agent, int games, int prefix_len, std::uint64_t seed,
                                     int threads) {
  const auto results = run_games(agent, games, seed, threads);
  FirstMoveResult r;
  r.games = games;
  std::set<std::vector<int>> prefixes;
  double first = 0;
  for (const auto& g : results) {
    first += g.outcome[0];
    if (prefix_len > 0 && static_cast<int>(g.sequence.size()) > prefix_len) {
      prefixes.emplace(g.sequence.begin(), g.sequence.begin() + prefix_len);
    } else {
      prefixes.insert(g.sequence);
    }
  }
  r.first_player_win_rate = first / games;
  r.unique_prefixes = static_cast<int>(prefixes.size());
  return r;
}

StateSpaceEstimate state_space_estimate(double mean_turns, double mean_actions) {
  if (!(mean_turns > 0) || !(mean_actions > 0)) {
    throw GameError(ErrorCode::kInvalidArgument, "state space estimate needs positive inputs");
  }
  StateSpaceEstimate e;
  e.log10_actions_pow_turns = mean_turns * std::log10(mean_actions);
  e.log10_turns_pow_actions = mean_actions * std::log10(mean_turns);
  e.actions_pow_turns = std::pow(mean_actions, mean_turns);
  e.turns_pow_actions = std::pow(mean_turns, mean_actions);
  return e;
}

}  // namespace tlink::analysis
