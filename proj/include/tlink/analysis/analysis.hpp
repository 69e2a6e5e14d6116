#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tlink/engine/agent.hpp"

namespace tlink::analysis {

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

struct TurnStats {
  int turn = 0;      // 1-based placement number
  int games = 0;     // games that reached this turn
  double mean = 0;   // mean legal move count over those games
  double stddev = 0;
  double mean_with_ended = 0;  // finished games count as zero moves
};

struct BranchingProfile {
  int games = 0;
  double mean_length = 0;  // placements per game
  std::vector<TurnStats> turns;
  std::vector<int> lengths;
};

// Self-play with one agent per seat; records the mover's legal move count
// before every placement. Game g uses split_rng(seed, g).
BranchingProfile branching_profile(const AgentFactory& agent, int games, std::uint64_t seed, int threads = 1);

// Delimited table: turn,games,mean,stddev,meanWithEnded
std::string profile_table(const BranchingProfile& profile);

struct FirstMoveResult {
  int games = 0;
  double first_player_win_rate = 0;  // draws count half
  int unique_prefixes = 0;           // distinct opening sequences of the requested length
};

// prefix_len = 0 compares whole games. Sequences are compared exactly on
// action indices (skips included as -1).
FirstMoveResult first_move_advantage(const AgentFactory& agent, int games, int prefix_len, std::uint64_t seed,
                                     int threads = 1);

struct StateSpaceEstimate {
  double actions_pow_turns = 0;  // meanActions ^ meanTurns
  double turns_pow_actions = 0;  // meanTurns ^ meanActions, the paper's printed order
  double log10_actions_pow_turns = 0;
  double log10_turns_pow_actions = 0;
};

StateSpaceEstimate state_space_estimate(double mean_turns, double mean_actions);

}  // namespace tlink::analysis
