#include "tlink/engine/agent.hpp"

namespace tlink {

Move RandomAgent::choose(const GameState& state, Rng& rng) {
  state.legal_moves(scratch_);
  if (scratch_.empty()) throw GameError(ErrorCode::kNoLegalMoves, "no legal moves");
  std::uniform_int_distribution<std::size_t> pick(0, scratch_.size() - 1);
  return scratch_[pick(rng)];
}

Move FirstMoveAgent::choose(const GameState& state, Rng& /*rng*/) {
  const auto& pos = state.position();
  for (const auto& t : templates()) {
    for (int c = 0; c + t.width <= kBoardWidth; ++c) {
      const Move m{t.id, c};
      if (pos.can_place(state.current(), m)) return m;
    }
  }
  throw GameError(ErrorCode::kNoLegalMoves, "no legal moves");
}

GameState play_match(std::span<Agent* const> seats, Rng& rng) {
  GameState state(static_cast<int>(seats.size()));
  while (!state.finished()) {
    const Move m = seats[state.current()]->choose(state, rng);
    state.apply(m);
  }
  return state;
}

Rng split_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace tlink
