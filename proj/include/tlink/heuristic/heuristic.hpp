#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tlink/engine/agent.hpp"
#include "tlink/engine/game_state.hpp"

namespace tlink::heuristic {

inline constexpr double kMaxWeight = 15.0;

struct Weights {
  double edges = 0.0;   // connectable edges
  double group = 0.0;   // connected pieces
  double score = 0.0;   // current score
  double block = 0.0;   // blocked opponent edges

  bool valid() const;
  Weights scaled(double c) const { return {edges * c, group * c, score * c, block * c}; }
  friend Weights operator+(const Weights& a, const Weights& b) {
    return {a.edges + b.edges, a.group + b.group, a.score + b.score, a.block + b.block};
  }
  friend bool operator==(const Weights&, const Weights&) = default;
};

// Hand-set stand-in for the "user" profile; the original values were never
// published.
inline constexpr Weights kUserWeights{0.0, 2.0, 4.0, 1.0};

struct FeatureVector {
  int connectable_edges = 0;  // empty cells edge-adjacent to own squares
  int group_size = 0;         // own pieces touching at least one other own piece
  int player_score = 0;       // group points minus penalties
  int blocked_edges = 0;      // opponent square edges covered by own squares
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector features(const Position& position, int player);
inline FeatureVector features(const GameState& state, int player) {
  return features(state.position(), player);
}

double evaluate(const FeatureVector& f, const Weights& w);
inline double evaluate(const GameState& state, int player, const Weights& w) {
  return evaluate(features(state, player), w);
}

// Every legal move whose resulting position scores the maximum for the
// player to move. Ascending action order.
std::vector<Move> best_moves(const GameState& state, const Weights& w);

// Uniformly random among best_moves(). Throws kNoLegalMoves.
Move choose_move(const GameState& state, const Weights& w, Rng& rng);

// Four independent U[0, 15] draws.
Weights random_weights(Rng& rng);

enum class TieBreak { kRandom, kLowestAction };

// One-ply greedy player. With no fixed weights it draws fresh random weights
// before every move.
class HeuristicAgent final : public Agent {
 public:
  HeuristicAgent(std::string name, Weights weights, TieBreak tie_break = TieBreak::kRandom)
      : name_(std::move(name)), weights_(weights), tie_break_(tie_break) {}
  static HeuristicAgent random_weighted(std::string name = "random-heuristic") {
    HeuristicAgent a(std::move(name), {});
    a.weights_.reset();
    return a;
  }

  std::string name() const override { return name_; }
  Move choose(const GameState& state, Rng& rng) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<HeuristicAgent>(*this); }
  const std::optional<Weights>& weights() const { return weights_; }

 private:
  std::string name_;
  std::optional<Weights> weights_;
  TieBreak tie_break_ = TieBreak::kRandom;
};

}  // namespace tlink::heuristic
