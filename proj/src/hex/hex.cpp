#include "tlink/hex/hex.hpp"

#include <deque>
#include <limits>

#include "tlink/engine/board.hpp"
#include "tlink/heuristic/tuner.hpp"

namespace tlink::hex {

HexBoard::HexBoard(int n) : n_(n), cells_(n * n, -1), parent_(n * n + 4) {
  if (n < 1 || n > kMaxSize) throw GameError(ErrorCode::kInvalidArgument, "hex size must be 1..11");
  for (std::size_t i = 0; i < parent_.size(); ++i) parent_[i] = static_cast<int>(i);
}

int HexBoard::find(int x) const {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void HexBoard::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a != b) parent_[a] = b;
}

int HexBoard::neighbours(int cell, int out[6]) const {
  const int r = cell / n_, c = cell % n_;
  static constexpr int dr[6] = {0, 0, -1, 1, -1, 1};
  static constexpr int dc[6] = {-1, 1, 0, 0, 1, -1};
  int k = 0;
  for (int i = 0; i < 6; ++i) {
    const int rr = r + dr[i], cc = c + dc[i];
    if (rr >= 0 && rr < n_ && cc >= 0 && cc < n_) out[k++] = rr * n_ + cc;
  }
  return k;
}

std::optional<int> HexBoard::winner() const {
  if (find(virtual_node(kLeft)) == find(virtual_node(kRight))) return 0;
  if (find(virtual_node(kTop)) == find(virtual_node(kBottom))) return 1;
  return std::nullopt;
}

void HexBoard::put(int cell, int player) {
  if (cell < 0 || cell >= cell_count() || cells_[cell] >= 0) {
    throw GameError(ErrorCode::kIllegalMove, "hex cell not empty");
  }
  cells_[cell] = static_cast<std::int8_t>(player);
  ++stones_;
  const int r = cell / n_, c = cell % n_;
  if (player == 0) {
    if (c == 0) unite(cell, virtual_node(kLeft));
    if (c == n_ - 1) unite(cell, virtual_node(kRight));
  } else {
    if (r == 0) unite(cell, virtual_node(kTop));
    if (r == n_ - 1) unite(cell, virtual_node(kBottom));
  }
  int nb[6];
  const int k = neighbours(cell, nb);
  for (int i = 0; i < k; ++i) {
    if (cells_[nb[i]] == player) unite(cell, nb[i]);
  }
}

void HexBoard::play(int cell) {
  put(cell, to_move_);
  to_move_ ^= 1;
}

std::optional<int> hex_winner(const HexBoard& board) {
  const int n = board.size();
  for (int player = 0; player < 2; ++player) {
    std::vector<char> seen(board.cell_count(), 0);
    std::vector<int> stack;
    for (int i = 0; i < n; ++i) {
      const int start = player == 0 ? i * n : i;
      if (board.at(start) == player) {
        seen[start] = 1;
        stack.push_back(start);
      }
    }
    while (!stack.empty()) {
      const int cell = stack.back();
      stack.pop_back();
      if ((player == 0 ? cell % n : cell / n) == n - 1) return player;
      int nb[6];
      const int k = board.neighbours(cell, nb);
      for (int j = 0; j < k; ++j) {
        if (!seen[nb[j]] && board.at(nb[j]) == player) {
          seen[nb[j]] = 1;
          stack.push_back(nb[j]);
        }
      }
    }
  }
  return std::nullopt;
}

int path_cost(const HexBoard& board, int player) {
  const int n = board.size();
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(board.cell_count(), kInf);
  std::deque<int> queue;
  auto cost = [&](int cell) { return board.at(cell) == player ? 0 : 1; };
  for (int i = 0; i < n; ++i) {
    const int start = player == 0 ? i * n : i;
    if (board.at(start) == 1 - player) continue;
    const int d = cost(start);
    if (d < dist[start]) {
      dist[start] = d;
      if (d == 0) queue.push_front(start);
      else queue.push_back(start);
    }
  }
  // 0-1 breadth-first search; a cell may be queued more than once.
  int best = kInf;
  while (!queue.empty()) {
    const int cell = queue.front();
    queue.pop_front();
    const int d = dist[cell];
    if ((player == 0 ? cell % n : cell / n) == n - 1) best = std::min(best, d);
    int nb[6];
    const int k = board.neighbours(cell, nb);
    for (int j = 0; j < k; ++j) {
      const int next = nb[j];
      if (board.at(next) == 1 - player) continue;
      const int w = cost(next);
      if (d + w < dist[next]) {
        dist[next] = d + w;
        if (w == 0) queue.push_front(next);
        else queue.push_back(next);
      }
    }
  }
  return best == kInf ? -1 : best;
}

int shortest_path_move(const HexBoard& board, int player) {
  if (board.full()) throw GameError(ErrorCode::kBoardFull, "hex board is full");
  int best_cell = -1;
  int best_cost = std::numeric_limits<int>::max();
  for (int cell = 0; cell < board.cell_count(); ++cell) {
    if (board.at(cell) >= 0) continue;
    HexBoard next = board;
    next.put(cell, player);
    int c = path_cost(next, player);
    if (c < 0) c = std::numeric_limits<int>::max() - 1;
    if (c < best_cost) {
      best_cost = c;
      best_cell = cell;
    }
  }
  return best_cell;
}

void HexGame::legal_actions(const State& s, std::vector<int>& out) const {
  out.clear();
  for (int cell = 0; cell < s.cell_count(); ++cell) {
    if (s.at(cell) < 0) out.push_back(cell);
  }
}

int HexGame::random_action(const State& s, mcts::Rng& rng) const {
  std::uniform_int_distribution<int> pick(0, s.cell_count() - 1);
  for (;;) {
    const int cell = pick(rng);
    if (s.at(cell) < 0) return cell;
  }
}

SweepRow hex_match_series(int size, int matches, const mcts::SearchConfig<HexBoard>& config,
                          std::uint64_t seed, int threads) {
  std::vector<int> won(matches, 0);
  const HexGame game;
  heuristic::parallel_for(matches, threads, [&](int m) {
    Rng rng = split_rng(seed, static_cast<std::uint64_t>(size) * 1000003ULL + m);
    const int mcts_player = m % 2;
    HexBoard board(size);
    while (!board.winner()) {
      int cell;
      if (board.to_move() == mcts_player) {
        cell = mcts::search(game, board, config, rng).action;
      } else {
        cell = shortest_path_move(board, board.to_move());
      }
      board.play(cell);
    }
    won[m] = *board.winner() == mcts_player;
  });
  SweepRow row;
  row.size = size;
  row.games = matches;
  for (int w : won) row.wins += w;
  return row;
}

std::vector<SweepRow> hex_sweep(std::span<const int> sizes, int matches,
                                const mcts::SearchConfig<HexBoard>& config, std::uint64_t seed,
                                int threads) {
  std::vector<SweepRow> rows;
  for (int n : sizes) rows.push_back(hex_match_series(n, matches, config, seed, threads));
  return rows;
}

}  // namespace tlink::hex
