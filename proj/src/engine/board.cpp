#include "tlink/engine/board.hpp"

#include <algorithm>

namespace tlink {

int Board::owner(int col, int row) const {
  const std::uint32_t bit = 1u << row;
  for (int p = 0; p < kMaxPlayers; ++p) {
    if (by_player_[p][col] & bit) return p;
  }
  return kEmpty;
}

int Board::occupied_count() const {
  int n = 0;
  for (auto mask : all_) n += std::popcount(mask);
  return n;
}

int Board::count_holes() const {
  int holes = 0;
  for (int c = 0; c < kBoardWidth; ++c) holes += height(c) - std::popcount(all_[c]);
  return holes;
}

void Board::write(const PieceTemplate& t, int column, int base_row, int player, int piece_id) {
  for (const auto& cell : t.cells) {
    const int col = column + cell.dc;
    const int row = base_row + cell.dr;
    const std::uint32_t bit = 1u << row;
    all_[col] |= bit;
    by_player_[player][col] |= bit;
    piece_[index(col, row)] = static_cast<std::int8_t>(piece_id);
  }
}

int try_drop_row(const Board& board, const PieceTemplate& t, int column) {
  if (column < 0 || column + t.width > kBoardWidth) return -1;
  // The piece falls straight down until some column of it lands on the
  // surface of that board column; overhangs cannot be passed.
  int base = 0;
  for (int dc = 0; dc < t.width; ++dc) base = std::max(base, board.height(column + dc) - t.bottom[dc]);
  if (base + t.height > kBoardHeight) return -1;
  return base;
}

int drop_row(const Board& board, const PieceTemplate& t, int column) {
  if (column < 0 || column + t.width > kBoardWidth) {
    throw GameError(ErrorCode::kOutOfBounds, "piece does not fit between the walls");
  }
  const int row = try_drop_row(board, t, column);
  if (row < 0) throw GameError(ErrorCode::kNoRoom, "column is full");
  return row;
}

int count_holes(const Board& board) { return board.count_holes(); }

}  // namespace tlink
