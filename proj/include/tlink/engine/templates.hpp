#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace tlink {

inline constexpr int kBoardWidth = 10;
inline constexpr int kBoardHeight = 20;
inline constexpr int kBoardCells = kBoardWidth * kBoardHeight;
inline constexpr int kTemplateCount = 19;
inline constexpr int kActionCount = kTemplateCount * kBoardWidth;  // 190
inline constexpr int kShapeCount = 5;
inline constexpr int kPiecesPerShape = 5;
inline constexpr int kPiecesPerPlayer = kShapeCount * kPiecesPerShape;
inline constexpr int kSquaresPerPiece = 4;
inline constexpr int kMinPlayers = 2;
inline constexpr int kMaxPlayers = 4;

enum class Shape : std::uint8_t { I = 0, O = 1, T = 2, S = 3, L = 4 };

std::string_view shape_name(Shape shape);

struct Cell {
  int dc = 0;  // column offset
  int dr = 0;  // row offset, upwards
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct PieceTemplate {
  int id = 0;
  Shape shape = Shape::I;
  std::array<Cell, 4> cells{};
  int width = 0;
  int height = 0;
  // Lowest occupied row offset per template column; only [0, width) is used.
  std::array<int, 4> bottom{};
  // Highest occupied row offset + 1 per template column.
  std::array<int, 4> top{};
};

// The canonical 19 oriented tetrominoes. Order: I, O, T, S, L; within a
// shape the clockwise rotations of the base piece come first, then the
// clockwise rotations of its mirror image, duplicates dropped.
std::span<const PieceTemplate> templates();

const PieceTemplate& piece_template(int id);

// Number of drop columns a template supports on an empty board.
inline int column_count(const PieceTemplate& t) { return kBoardWidth - t.width + 1; }

struct Move {
  int template_id = 0;
  int column = 0;

  constexpr int action() const { return template_id * kBoardWidth + column; }
  static constexpr Move from_action(int action) {
    return Move{action / kBoardWidth, action % kBoardWidth};
  }
  friend constexpr bool operator==(const Move&, const Move&) = default;
  friend constexpr auto operator<=>(const Move& a, const Move& b) {
    return a.action() <=> b.action();
  }
};

bool in_bounds(const Move& move);

// Number of (template, column) pairs that keep the piece inside the walls.
int in_bounds_move_count();

}  // namespace tlink
