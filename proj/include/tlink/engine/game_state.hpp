#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "tlink/engine/board.hpp"
#include "tlink/engine/templates.hpp"

namespace tlink {

inline constexpr int kMaxPiecesOnBoard = kBoardCells / kSquaresPerPiece;  // 50
inline constexpr int kMaxPenaltyPerTurn = 2;

struct PlayerState {
  int id = 0;
  std::array<int, kShapeCount> inventory{kPiecesPerShape, kPiecesPerShape, kPiecesPerShape,
                                          kPiecesPerShape, kPiecesPerShape};
  int penalties = 0;

  int remaining() const;
  int placed() const { return kPiecesPerPlayer - remaining(); }
  bool holds(Shape s) const { return inventory[static_cast<int>(s)] > 0; }
  friend bool operator==(const PlayerState&, const PlayerState&) = default;
};

struct MoveOutcome {
  int rest_row = 0;
  int new_holes = 0;
  int penalty = 0;
};

struct ScoreBreakdown {
  int group_points = 0;
  int minus_points = 0;
  int total = 0;
};

// Board plus everything scoring needs: inventories, penalties and the
// piece-level union-find that groups edge-connected same-colour pieces.
// Has no notion of whose turn it is.
class Position {
 public:
  explicit Position(int player_count = 2);

  int player_count() const { return player_count_; }
  const Board& board() const { return board_; }
  const PlayerState& player(int p) const { return players_[p]; }
  int piece_count() const { return piece_count_; }
  int piece_owner(int piece) const { return piece_owner_[piece]; }

  bool can_place(int player, const Move& move) const;
  bool has_legal_move(int player) const;
  void legal_moves(int player, std::vector<Move>& out) const;

  // Places without any legality check beyond the caller's; returns the
  // hole penalty bookkeeping.
  MoveOutcome place(int player, const Move& move);

  // Tracked incrementally on every placement.
  int group_points(int player) const { return group_points_[player]; }
  // Pieces of the player edge-connected to at least one other own piece.
  int connected_pieces(int player) const { return connected_pieces_[player]; }
  ScoreBreakdown score(int player) const;

  friend bool operator==(const Position&, const Position&) = default;

 private:
  int find(int piece) const;

  Board board_;
  std::array<PlayerState, kMaxPlayers> players_{};
  int player_count_ = 2;
  int piece_count_ = 0;
  std::array<std::int8_t, kMaxPiecesOnBoard> piece_owner_{};
  mutable std::array<std::int8_t, kMaxPiecesOnBoard> parent_{};
  std::array<std::int8_t, kMaxPiecesOnBoard> group_size_{};
  std::array<int, kMaxPlayers> group_points_{};
  std::array<int, kMaxPlayers> connected_pieces_{};
};

struct HistoryEntry {
  int player = 0;
  bool skip = false;
  Move move{};
  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

class GameState {
 public:
  explicit GameState(int player_count = 2);

  const Position& position() const { return position_; }
  const Board& board() const { return position_.board(); }
  int player_count() const { return position_.player_count(); }
  const PlayerState& player(int p) const { return position_.player(p); }
  int current() const { return current_; }
  // Number of pieces placed so far.
  int turn() const { return turn_; }
  bool finished() const { return finished_; }
  const std::vector<HistoryEntry>& history() const { return history_; }

  std::vector<Move> legal_moves() const;
  void legal_moves(std::vector<Move>& out) const;
  bool is_legal(const Move& move) const;

  // Throws kIllegalMove and leaves the state untouched when the move is not
  // among legal_moves().
  MoveOutcome apply(const Move& move);

  // Places without re-validating; the move must be legal.
  MoveOutcome apply_unchecked(const Move& move);

 private:
  void advance_turn();

  Position position_;
  int current_ = 0;
  int turn_ = 0;
  bool finished_ = false;
  std::vector<HistoryEntry> history_;
};

std::vector<Move> legal_moves(const GameState& state);
std::pair<GameState, MoveOutcome> apply_move(const GameState& state, const Move& move);

// Group points recomputed from the board alone (cell flood fill).
ScoreBreakdown score(const GameState& state, int player);
int recompute_group_points(const Position& position, int player);

struct Outcome {
  std::vector<int> winners;  // more than one entry means a draw among them
  bool draw() const { return winners.size() > 1; }
};

// Highest total wins; ties are draws among the tied players.
Outcome winner_from_totals(std::span<const int> totals);

// Throws kNotFinished.
Outcome winner(const GameState& state);

// Per-player result in [0, 1]: 1 sole winner, 1/k for a k-way tie, 0 loss.
std::vector<double> outcome_values(const GameState& state);

// Squares all players together can place.
int capacity_check(int player_count = 2);

}  // namespace tlink
