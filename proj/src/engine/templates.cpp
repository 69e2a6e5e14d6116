#include "tlink/engine/templates.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace tlink {
namespace {

using CellSet = std::array<Cell, 4>;

CellSet normalize(CellSet cells) {
  int min_c = cells[0].dc, min_r = cells[0].dr;
  for (const auto& c : cells) {
    min_c = std::min(min_c, c.dc);
    min_r = std::min(min_r, c.dr);
  }
  for (auto& c : cells) {
    c.dc -= min_c;
    c.dr -= min_r;
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return a.dr != b.dr ? a.dr < b.dr : a.dc < b.dc;
  });
  return cells;
}

// Clockwise quarter turn with rows pointing up: (x, y) -> (y, -x).
CellSet rotate_cw(CellSet cells) {
  for (auto& c : cells) c = Cell{c.dr, -c.dc};
  return normalize(cells);
}

CellSet mirror(CellSet cells) {
  for (auto& c : cells) c.dc = -c.dc;
  return normalize(cells);
}

PieceTemplate make_template(int id, Shape shape, const CellSet& cells) {
  PieceTemplate t;
  t.id = id;
  t.shape = shape;
  t.cells = cells;
  for (const auto& c : cells) {
    t.width = std::max(t.width, c.dc + 1);
    t.height = std::max(t.height, c.dr + 1);
  }
  t.bottom.fill(kBoardHeight);
  t.top.fill(0);
  for (const auto& c : cells) {
    t.bottom[c.dc] = std::min(t.bottom[c.dc], c.dr);
    t.top[c.dc] = std::max(t.top[c.dc], c.dr + 1);
  }
  return t;
}

std::array<PieceTemplate, kTemplateCount> build_templates() {
  struct Base {
    Shape shape;
    CellSet cells;
  };
  const std::array<Base, kShapeCount> bases{{
      {Shape::I, {{{0, 0}, {0, 1}, {0, 2}, {0, 3}}}},  // vertical bar
      {Shape::O, {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}}},
      {Shape::T, {{{0, 0}, {1, 0}, {2, 0}, {1, 1}}}},  // flat side down
      {Shape::S, {{{0, 0}, {1, 0}, {1, 1}, {2, 1}}}},
      {Shape::L, {{{0, 0}, {0, 1}, {0, 2}, {1, 0}}}},  // foot to the right
  }};

  std::array<PieceTemplate, kTemplateCount> out{};
  int next = 0;
  for (const auto& base : bases) {
    std::vector<CellSet> seen;
    for (const CellSet& start : {normalize(base.cells), mirror(base.cells)}) {
      CellSet cur = start;
      for (int turn = 0; turn < 4; ++turn) {
        if (std::find(seen.begin(), seen.end(), cur) == seen.end()) {
          seen.push_back(cur);
          if (next >= kTemplateCount) throw std::logic_error("too many templates");
          out[next] = make_template(next, base.shape, cur);
          ++next;
        }
        cur = rotate_cw(cur);
      }
    }
  }
  if (next != kTemplateCount) throw std::logic_error("template enumeration mismatch");
  return out;
}

}  // namespace

std::string_view shape_name(Shape shape) {
  static constexpr std::array<std::string_view, kShapeCount> names{"I", "O", "T", "S", "L"};
  return names[static_cast<int>(shape)];
}

std::span<const PieceTemplate> templates() {
  static const auto all = build_templates();
  return all;
}

const PieceTemplate& piece_template(int id) {
  if (id < 0 || id >= kTemplateCount) throw std::out_of_range("template id out of range");
  return templates()[id];
}

bool in_bounds(const Move& move) {
  if (move.template_id < 0 || move.template_id >= kTemplateCount) return false;
  if (move.column < 0) return false;
  return move.column + templates()[move.template_id].width <= kBoardWidth;
}

int in_bounds_move_count() {
  int n = 0;
  for (const auto& t : templates()) n += column_count(t);
  return n;
}

}  // namespace tlink
