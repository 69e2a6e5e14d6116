#include "tlink/engine/game_state.hpp"

#include <algorithm>
#include <numeric>

namespace tlink {

int PlayerState::remaining() const {
  return std::accumulate(inventory.begin(), inventory.end(), 0);
}

Position::Position(int player_count) : player_count_(player_count) {
  if (player_count < kMinPlayers || player_count > kMaxPlayers) {
    throw GameError(ErrorCode::kInvalidArgument, "player count must be 2..4");
  }
  for (int p = 0; p < kMaxPlayers; ++p) players_[p].id = p;
  piece_owner_.fill(-1);
  parent_.fill(-1);
  group_size_.fill(0);
}

bool Position::can_place(int player, const Move& move) const {
  if (!in_bounds(move)) return false;
  const auto& t = templates()[move.template_id];
  if (!players_[player].holds(t.shape)) return false;
  return try_drop_row(board_, t, move.column) >= 0;
}

bool Position::has_legal_move(int player) const {
  const auto& ps = players_[player];
  for (const auto& t : templates()) {
    if (!ps.holds(t.shape)) continue;
    for (int c = 0; c + t.width <= kBoardWidth; ++c) {
      if (try_drop_row(board_, t, c) >= 0) return true;
    }
  }
  return false;
}

void Position::legal_moves(int player, std::vector<Move>& out) const {
  out.clear();
  const auto& ps = players_[player];
  for (const auto& t : templates()) {
    if (!ps.holds(t.shape)) continue;
    for (int c = 0; c + t.width <= kBoardWidth; ++c) {
      if (try_drop_row(board_, t, c) >= 0) out.push_back(Move{t.id, c});
    }
  }
}

int Position::find(int piece) const {
  int root = piece;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[piece] != root) {
    const int next = parent_[piece];
    parent_[piece] = static_cast<std::int8_t>(root);
    piece = next;
  }
  return root;
}

MoveOutcome Position::place(int player, const Move& move) {
  const auto& t = templates()[move.template_id];
  const int row = try_drop_row(board_, t, move.column);

  int holes_before = 0;
  for (int dc = 0; dc < t.width; ++dc) {
    const int c = move.column + dc;
    holes_before += board_.height(c) - std::popcount(board_.column_mask(c));
  }

  const int id = piece_count_++;
  board_.write(t, move.column, row, player, id);
  piece_owner_[id] = static_cast<std::int8_t>(player);
  parent_[id] = static_cast<std::int8_t>(id);
  group_size_[id] = 1;
  --players_[player].inventory[static_cast<int>(t.shape)];

  int holes_after = 0;
  for (int dc = 0; dc < t.width; ++dc) {
    const int c = move.column + dc;
    holes_after += board_.height(c) - std::popcount(board_.column_mask(c));
  }

  // Merge with every same-colour piece touching one of the new squares.
  auto contribution = [](int size) { return size >= 3 ? size : 0; };
  auto connected = [](int size) { return size >= 2 ? size : 0; };
  int root = id;
  for (const auto& cell : t.cells) {
    const int col = move.column + cell.dc;
    const int r = row + cell.dr;
    const int nbrs[4][2] = {{col - 1, r}, {col + 1, r}, {col, r - 1}, {col, r + 1}};
    for (const auto& n : nbrs) {
      if (n[0] < 0 || n[0] >= kBoardWidth || n[1] < 0 || n[1] >= kBoardHeight) continue;
      const int other = board_.piece_at(n[0], n[1]);
      if (other < 0 || other == id || piece_owner_[other] != player) continue;
      const int other_root = find(other);
      if (other_root == root) continue;
      group_points_[player] -= contribution(group_size_[other_root]) + contribution(group_size_[root]);
      connected_pieces_[player] -= connected(group_size_[other_root]) + connected(group_size_[root]);
      parent_[root] = static_cast<std::int8_t>(other_root);
      group_size_[other_root] = static_cast<std::int8_t>(group_size_[other_root] + group_size_[root]);
      root = other_root;
      group_points_[player] += contribution(group_size_[root]);
      connected_pieces_[player] += connected(group_size_[root]);
    }
  }

  MoveOutcome out;
  out.rest_row = row;
  out.new_holes = holes_after - holes_before;
  out.penalty = std::min(out.new_holes, kMaxPenaltyPerTurn);
  players_[player].penalties += out.penalty;
  return out;
}

ScoreBreakdown Position::score(int player) const {
  ScoreBreakdown s;
  s.group_points = group_points_[player];
  s.minus_points = players_[player].penalties;
  s.total = s.group_points - s.minus_points;
  return s;
}

GameState::GameState(int player_count) : position_(player_count) { history_.reserve(64); }

std::vector<Move> GameState::legal_moves() const {
  std::vector<Move> out;
  legal_moves(out);
  return out;
}

void GameState::legal_moves(std::vector<Move>& out) const {
  if (finished_) {
    out.clear();
    return;
  }
  position_.legal_moves(current_, out);
}

bool GameState::is_legal(const Move& move) const {
  return !finished_ && position_.can_place(current_, move);
}

MoveOutcome GameState::apply(const Move& move) {
  if (!is_legal(move)) throw GameError(ErrorCode::kIllegalMove, "move is not legal in this state");
  return apply_unchecked(move);
}

MoveOutcome GameState::apply_unchecked(const Move& move) {
  const MoveOutcome out = position_.place(current_, move);
  history_.push_back(HistoryEntry{current_, false, move});
  ++turn_;
  advance_turn();
  return out;
}

void GameState::advance_turn() {
  const int n = position_.player_count();
  for (int k = 1; k <= n; ++k) {
    const int candidate = (current_ + k) % n;
    if (position_.has_legal_move(candidate)) {
      for (int s = 1; s < k; ++s) history_.push_back(HistoryEntry{(current_ + s) % n, true, {}});
      current_ = candidate;
      return;
    }
  }
  finished_ = true;
}

std::vector<Move> legal_moves(const GameState& state) { return state.legal_moves(); }

std::pair<GameState, MoveOutcome> apply_move(const GameState& state, const Move& move) {
  GameState next = state;
  const MoveOutcome out = next.apply(move);
  return {std::move(next), out};
}

int recompute_group_points(const Position& position, int player) {
  const Board& board = position.board();
  const int pieces = position.piece_count();
  std::vector<int> parent(pieces);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int row = 0; row < kBoardHeight; ++row) {
    for (int col = 0; col < kBoardWidth; ++col) {
      if (board.owner(col, row) != player) continue;
      const int here = board.piece_at(col, row);
      if (col + 1 < kBoardWidth && board.owner(col + 1, row) == player) {
        parent[find(here)] = find(board.piece_at(col + 1, row));
      }
      if (row + 1 < kBoardHeight && board.owner(col, row + 1) == player) {
        parent[find(here)] = find(board.piece_at(col, row + 1));
      }
    }
  }
  std::vector<int> size(pieces, 0);
  for (int p = 0; p < pieces; ++p) {
    if (position.piece_owner(p) == player) ++size[find(p)];
  }
  int points = 0;
  for (int s : size) {
    if (s >= 3) points += s;
  }
  return points;
}

ScoreBreakdown score(const GameState& state, int player) {
  ScoreBreakdown s;
  s.group_points = recompute_group_points(state.position(), player);
  s.minus_points = state.player(player).penalties;
  s.total = s.group_points - s.minus_points;
  return s;
}

Outcome winner_from_totals(std::span<const int> totals) {
  Outcome out;
  int best = 0;
  for (int p = 0; p < static_cast<int>(totals.size()); ++p) {
    const int total = totals[p];
    if (out.winners.empty() || total > best) {
      best = total;
      out.winners = {p};
    } else if (total == best) {
      out.winners.push_back(p);
    }
  }
  return out;
}

Outcome winner(const GameState& state) {
  if (!state.finished()) throw GameError(ErrorCode::kNotFinished, "game is not finished");
  std::array<int, kMaxPlayers> totals{};
  for (int p = 0; p < state.player_count(); ++p) totals[p] = state.position().score(p).total;
  return winner_from_totals(std::span<const int>(totals.data(), state.player_count()));
}

std::vector<double> outcome_values(const GameState& state) {
  const Outcome o = winner(state);
  std::vector<double> values(state.player_count(), 0.0);
  for (int p : o.winners) values[p] = 1.0 / static_cast<double>(o.winners.size());
  return values;
}

int capacity_check(int player_count) {
  return kPiecesPerPlayer * kSquaresPerPiece * player_count;
}

}  // namespace tlink
