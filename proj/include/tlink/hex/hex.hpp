#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tlink/engine/agent.hpp"
#include "tlink/mcts/mcts.hpp"

namespace tlink::hex {

inline constexpr int kMaxSize = 11;

// Cell index = row * n + column. Player 0 joins the left and right edges,
// player 1 the top and bottom edges.
class HexBoard {
 public:
  explicit HexBoard(int n);

  int size() const { return n_; }
  int cell_count() const { return n_ * n_; }
  int at(int cell) const { return cells_[cell]; }  // -1 empty
  int stones() const { return stones_; }
  int to_move() const { return to_move_; }
  std::optional<int> winner() const;
  bool full() const { return stones_ == cell_count(); }

  // Places a stone for the player to move. The cell must be empty.
  void play(int cell);
  // Places an arbitrary stone, ignoring turn order.
  void put(int cell, int player);

  // Up to six neighbours.
  int neighbours(int cell, int out[6]) const;

 private:
  int find(int x) const;
  void unite(int a, int b);
  enum { kLeft, kRight, kTop, kBottom };
  int virtual_node(int which) const { return n_ * n_ + which; }

  int n_;
  std::vector<std::int8_t> cells_;
  mutable std::vector<int> parent_;
  int stones_ = 0;
  int to_move_ = 0;
};

// Side-to-side connection check by flood fill, independent of the board's
// union-find.
std::optional<int> hex_winner(const HexBoard& board);

// Cheapest path between the player's edges: own stones cost 0, empty cells
// 1, opponent stones block. -1 when no path exists.
int path_cost(const HexBoard& board, int player);

// Empty cell minimizing the player's path cost after playing there, lowest
// index on ties. Throws GameError(kBoardFull).
int shortest_path_move(const HexBoard& board, int player);

struct HexGame {
  using State = HexBoard;
  int action_count() const { return kMaxSize * kMaxSize; }
  void legal_actions(const State& s, std::vector<int>& out) const;
  void apply(State& s, int action) const { s.play(action); }
  bool terminal(const State& s) const { return s.winner().has_value(); }
  int to_move(const State& s) const { return s.to_move(); }
  int player_count(const State&) const { return 2; }
  double outcome(const State& s, int player) const { return s.winner() == player ? 1.0 : 0.0; }
  int random_action(const State& s, mcts::Rng& rng) const;
};

struct SweepRow {
  int size = 0;
  int games = 0;
  int wins = 0;
  double win_rate() const { return games ? static_cast<double>(wins) / games : 0.0; }
};

// MCTS against the shortest-path player, alternating who starts. Match m at
// size n uses an rng derived from (seed, n, m).
SweepRow hex_match_series(int size, int matches, const mcts::SearchConfig<HexBoard>& config,
                          std::uint64_t seed, int threads = 1);
std::vector<SweepRow> hex_sweep(std::span<const int> sizes, int matches,
                                const mcts::SearchConfig<HexBoard>& config, std::uint64_t seed,
                                int threads = 1);

}  // namespace tlink::hex
