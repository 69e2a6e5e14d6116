#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tlink/engine/game_state.hpp"

namespace tlink {

using Rng = std::mt19937_64;

// Something that picks a move for the player to move. Agents may keep
// scratch state, so concurrent users each take a clone().
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  // Precondition: the state is not finished (the player to move always has
  // at least one legal move).
  virtual Move choose(const GameState& state, Rng& rng) = 0;
  virtual std::unique_ptr<Agent> clone() const = 0;
};

class RandomAgent final : public Agent {
 public:
  std::string name() const override { return "random"; }
  Move choose(const GameState& state, Rng& rng) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<RandomAgent>(); }

 private:
  std::vector<Move> scratch_;
};

// Always the legal move with the lowest action index.
class FirstMoveAgent final : public Agent {
 public:
  std::string name() const override { return "first"; }
  Move choose(const GameState& state, Rng& rng) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<FirstMoveAgent>(); }
};

// Plays one game; seats[i] controls player i.
GameState play_match(std::span<Agent* const> seats, Rng& rng);

// Derives an independent generator for a sub-task (worker, match index).
Rng split_rng(std::uint64_t seed, std::uint64_t stream);

}  // namespace tlink
