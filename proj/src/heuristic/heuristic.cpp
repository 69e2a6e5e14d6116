#include "tlink/heuristic/heuristic.hpp"

#include <bit>
#include <cmath>

namespace tlink::heuristic {

bool Weights::valid() const {
  for (double w : {edges, group, score, block}) {
    if (!std::isfinite(w) || w < 0.0 || w > kMaxWeight) return false;
  }
  return true;
}

FeatureVector features(const Position& position, int player) {
  const Board& board = position.board();
  FeatureVector f;
  for (int c = 0; c < kBoardWidth; ++c) {
    const std::uint32_t all = board.column_mask(c);
    const std::uint32_t own = board.player_mask(player, c);
    const std::uint32_t opp = all & ~own;
    std::uint32_t reach = (own << 1) | (own >> 1);
    std::uint32_t opp_right = 0;
    if (c > 0) reach |= board.player_mask(player, c - 1);
    if (c + 1 < kBoardWidth) {
      const std::uint32_t own_right = board.player_mask(player, c + 1);
      reach |= own_right;
      opp_right = board.column_mask(c + 1) & ~own_right;
      f.blocked_edges += std::popcount(own & opp_right) + std::popcount(opp & own_right);
    }
    f.connectable_edges += std::popcount(reach & ~all & kColumnFull);
    f.blocked_edges += std::popcount(own & (opp << 1)) + std::popcount(own & (opp >> 1));
  }
  f.group_size = position.connected_pieces(player);
  f.player_score = position.score(player).total;
  return f;
}

double evaluate(const FeatureVector& f, const Weights& w) {
  return w.edges * f.connectable_edges + w.group * f.group_size + w.score * f.player_score +
         w.block * f.blocked_edges;
}

std::vector<Move> best_moves(const GameState& state, const Weights& w) {
  thread_local std::vector<Move> legal;
  state.legal_moves(legal);
  std::vector<Move> best;
  double best_value = 0.0;
  const int me = state.current();
  for (const Move& m : legal) {
    Position next = state.position();
    next.place(me, m);
    const double v = evaluate(features(next, me), w);
    if (best.empty() || v > best_value) {
      best_value = v;
      best.assign(1, m);
    } else if (v == best_value) {
      best.push_back(m);
    }
  }
  return best;
}

Move choose_move(const GameState& state, const Weights& w, Rng& rng) {
  const auto best = best_moves(state, w);
  if (best.empty()) throw GameError(ErrorCode::kNoLegalMoves, "no legal moves");
  if (best.size() == 1) return best.front();
  std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
  return best[pick(rng)];
}

Weights random_weights(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, kMaxWeight);
  Weights w;
  w.edges = u(rng);
  w.group = u(rng);
  w.score = u(rng);
  w.block = u(rng);
  return w;
}

Move HeuristicAgent::choose(const GameState& state, Rng& rng) {
  const Weights w = weights_ ? *weights_ : random_weights(rng);
  if (tie_break_ == TieBreak::kLowestAction) {
    const auto best = best_moves(state, w);
    if (best.empty()) throw GameError(ErrorCode::kNoLegalMoves, "no legal moves");
    return best.front();
  }
  return choose_move(state, w, rng);
}

}  // namespace tlink::heuristic
