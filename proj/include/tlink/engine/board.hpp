#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "tlink/engine/templates.hpp"

namespace tlink {

enum class ErrorCode {
  kOutOfBounds,
  kNoRoom,
  kIllegalMove,
  kNotFinished,
  kNoLegalMoves,
  kCorruptLog,
  kInvalidArgument,
  kBoardFull,
  kEpisodeFinished,
  kProtocolError,
};

class GameError : public std::runtime_error {
 public:
  GameError(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr std::uint32_t kColumnFull = (1u << kBoardHeight) - 1;

// 10x20 grid, column 0 on the left, row 0 at the bottom. Occupancy is kept
// as one 20-bit mask per column (bit r = row r), split by player, plus the
// id of the piece covering each cell.
class Board {
 public:
  static constexpr int kEmpty = -1;

  Board() {
    all_.fill(0);
    for (auto& p : by_player_) p.fill(0);
    piece_.fill(kEmpty);
  }

  bool empty(int col, int row) const { return ((all_[col] >> row) & 1u) == 0; }
  int piece_at(int col, int row) const { return piece_[index(col, row)]; }
  int owner(int col, int row) const;

  std::uint32_t column_mask(int col) const { return all_[col]; }
  std::uint32_t player_mask(int player, int col) const { return by_player_[player][col]; }

  // Row index one above the highest occupied cell (0 for an empty column).
  int height(int col) const { return std::bit_width(all_[col]); }

  int occupied_count() const;

  // Empty cells that have at least one occupied cell above them.
  int count_holes() const;

  // Writes the four cells; the caller guarantees they are empty and in range.
  void write(const PieceTemplate& t, int column, int base_row, int player, int piece_id);

  friend bool operator==(const Board&, const Board&) = default;

 private:
  static int index(int col, int row) { return row * kBoardWidth + col; }

  std::array<std::uint32_t, kBoardWidth> all_;
  std::array<std::array<std::uint32_t, kBoardWidth>, kMaxPlayers> by_player_;
  std::array<std::int8_t, kBoardCells> piece_;
};

// Base row where a piece dropped from above the board comes to rest, or -1
// when it is out of bounds or would stick out of the top.
int try_drop_row(const Board& board, const PieceTemplate& t, int column);

// Throwing variant: kOutOfBounds or kNoRoom.
int drop_row(const Board& board, const PieceTemplate& t, int column);

int count_holes(const Board& board);

}  // namespace tlink
