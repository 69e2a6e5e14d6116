#include "tlink/mcts/tetris.hpp"

namespace tlink::mcts {

void TetrisLinkGame::legal_actions(const State& state, std::vector<int>& out) const {
  thread_local std::vector<Move> moves;
  state.legal_moves(moves);
  out.clear();
  for (const Move& m : moves) out.push_back(m.action());
}

double TetrisLinkGame::outcome(const State& state, int player) const {
  return outcome_values(state)[player];
}

namespace {

const std::vector<Move>& in_bounds_moves() {
  static const std::vector<Move> moves = [] {
    std::vector<Move> out;
    for (int a = 0; a < kActionCount; ++a) {
      if (in_bounds(Move::from_action(a))) out.push_back(Move::from_action(a));
    }
    return out;
  }();
  return moves;
}

}  // namespace

int TetrisLinkGame::random_action(const State& state, Rng& rng) const {
  const auto& slots = in_bounds_moves();
  const Position& pos = state.position();
  const int me = state.current();
  std::uniform_int_distribution<std::size_t> pick(0, slots.size() - 1);
  for (int tries = 0; tries < 12; ++tries) {
    const Move m = slots[pick(rng)];
    if (pos.can_place(me, m)) return m.action();
  }
  thread_local std::vector<Move> legal;
  state.legal_moves(legal);
  std::uniform_int_distribution<std::size_t> fallback(0, legal.size() - 1);
  return legal[fallback(rng)].action();
}

PlayoutPolicy<GameState> heuristic_playout(const heuristic::Weights& weights) {
  return [weights](const GameState& state, Rng& rng) {
    return heuristic::choose_move(state, weights, rng).action();
  };
}

namespace {

bool same_entry(const HistoryEntry& a, const HistoryEntry& b) {
  if (a.player != b.player || a.skip != b.skip) return false;
  return a.skip || a.move == b.move;
}

}  // namespace

std::vector<std::vector<int>> continuations(const GameState& state, std::span<const GameLog> logs) {
  std::vector<std::vector<int>> out;
  const auto& history = state.history();
  for (const GameLog& log : logs) {
    if (log.player_count != state.player_count() || log.moves.size() < history.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < history.size() && match; ++i) match = same_entry(history[i], log.moves[i]);
    if (!match) continue;
    std::vector<int> seq;
    for (std::size_t i = history.size(); i < log.moves.size(); ++i) {
      if (!log.moves[i].skip) seq.push_back(log.moves[i].move.action());
    }
    out.push_back(std::move(seq));
  }
  return out;
}

int prefill_rave(TetrisTree& tree, const TetrisConfig& config, std::span<const GameLog> logs) {
  const auto seqs = continuations(tree.root_state(), logs);
  try {
    prefill(tree, config, std::span<const std::vector<int>>(seqs));
  } catch (const SearchError& e) {
    throw GameError(ErrorCode::kCorruptLog, e.what());
  }
  return static_cast<int>(seqs.size());
}

MctsAgent::MctsAgent(std::string name, TetrisConfig config, std::vector<GameLog> prefill_logs)
    : name_(std::move(name)), config_(std::move(config)) {
  for (const GameLog& log : prefill_logs) replay(log);
  if (!prefill_logs.empty()) logs_ = std::make_shared<const std::vector<GameLog>>(std::move(prefill_logs));
}

Move MctsAgent::choose(const GameState& state, Rng& rng) {
  static const TetrisLinkGame game;
  TetrisTree tree(game, state);
  if (tree.root().edge_count == 0) throw GameError(ErrorCode::kNoLegalMoves, "no legal moves");
  if (logs_) prefill_rave(tree, config_, *logs_);
  last_ = run_search(tree, config_, rng);
  return Move::from_action(last_->action);
}

}  // namespace tlink::mcts
