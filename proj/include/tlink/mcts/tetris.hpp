#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlink/engine/agent.hpp"
#include "tlink/engine/game_log.hpp"
#include "tlink/heuristic/heuristic.hpp"
#include "tlink/mcts/mcts.hpp"

namespace tlink::mcts {

// Tetris Link behind the generic search interface. Actions are
// template * 10 + column.
struct TetrisLinkGame {
  using State = GameState;
  int action_count() const { return kActionCount; }
  void legal_actions(const State& state, std::vector<int>& out) const;
  void apply(State& state, int action) const { state.apply_unchecked(Move::from_action(action)); }
  bool terminal(const State& state) const { return state.finished(); }
  int to_move(const State& state) const { return state.current(); }
  int player_count(const State& state) const { return state.player_count(); }
  double outcome(const State& state, int player) const;
  // Uniform over legal actions without enumerating them: rejection sampling
  // over in-bounds slots, falling back to enumeration after a few misses.
  int random_action(const State& state, Rng& rng) const;
};

using TetrisConfig = SearchConfig<GameState>;
using TetrisTree = Tree<TetrisLinkGame>;

PlayoutPolicy<GameState> heuristic_playout(const heuristic::Weights& weights);

// Actions each log plays after `state`, for logs whose recorded history
// starts with the state's history. Legality is checked when the actions
// are replayed into a tree.
std::vector<std::vector<int>> continuations(const GameState& state, std::span<const GameLog> logs);

// Seeds `tree` from every log that passes through its root. Returns the
// number of logs used. Throws kCorruptLog.
int prefill_rave(TetrisTree& tree, const TetrisConfig& config, std::span<const GameLog> logs);

class MctsAgent final : public Agent {
 public:
  MctsAgent(std::string name, TetrisConfig config, std::vector<GameLog> prefill_logs = {});

  std::string name() const override { return name_; }
  Move choose(const GameState& state, Rng& rng) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<MctsAgent>(*this); }

  const TetrisConfig& config() const { return config_; }
  const std::optional<SearchResult>& last_result() const { return last_; }

 private:
  std::string name_;
  TetrisConfig config_;
  std::shared_ptr<const std::vector<GameLog>> logs_;
  std::optional<SearchResult> last_;
};

}  // namespace tlink::mcts
