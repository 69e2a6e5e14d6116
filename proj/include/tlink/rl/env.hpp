#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tlink/engine/agent.hpp"
#include "tlink/heuristic/heuristic.hpp"

namespace tlink::rl {

// Observation layout, all from the agent's perspective:
//   [0, 200)    own cells, index row * 10 + column, bottom row first
//   [200, 400)  opponent cells
//   [400, 405)  own inventory per shape (I, O, T, S, L) / 5
//   [405, 410)  opponent inventory / 5
//   [410]       own score / 100
//   [411]       opponent score / 100
//   [412, 602)  legal action mask
inline constexpr int kPlaneSize = kBoardCells;
inline constexpr int kInventoryOffset = 2 * kPlaneSize;
inline constexpr int kScoreOffset = kInventoryOffset + 2 * kShapeCount;
inline constexpr int kMaskOffset = kScoreOffset + 2;
inline constexpr int kObservationSize = kMaskOffset + kActionCount;

inline constexpr double kScolding = 0.1;

enum class RewardKind { kGuided, kScore, kSimple, kHeuristic };

RewardKind parse_reward(const std::string& text);
std::string reward_name(RewardKind kind);

struct EnvConfig {
  RewardKind reward = RewardKind::kGuided;
  bool delta = true;  // false: emit the absolute quantity every step
  double scolding = kScolding;
};

struct StepInfo {
  bool illegal_attempt = false;
  int score = 0;       // agent's total
  int group_size = 0;  // agent's pieces touching another own piece
  int legal_count = 0;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

std::vector<double> observe(const GameState& state, int perspective);

// Two-player environment; the opponent is part of the environment and
// replies before step() returns.
class TetrisLinkEnv {
 public:
  explicit TetrisLinkEnv(EnvConfig config = {}) : config_(config) {}

  std::vector<double> reset(std::uint64_t seed, std::unique_ptr<Agent> opponent, bool agent_first);

  // Throws kEpisodeFinished after the end, kInvalidArgument for actions
  // outside 0..189. Masked actions leave the state unchanged.
  StepResult step(int action);

  // Weight-choosing mode: the four numbers are clamped to [0, 15] and the
  // resulting heuristic picks the agent's move.
  StepResult step_weights(const std::array<double, 4>& weights);

  const GameState& state() const { return state_; }
  int agent_player() const { return agent_; }
  bool done() const { return state_.finished(); }
  const EnvConfig& config() const { return config_; }
  std::vector<double> observation() const { return observe(state_, agent_); }
  int episode_steps() const { return steps_; }

 private:
  double quantity() const;
  void opponent_moves();
  StepResult result(double reward, bool illegal) const;

  EnvConfig config_;
  GameState state_;
  std::unique_ptr<Agent> opponent_;
  Rng rng_;
  int agent_ = 0;
  int steps_ = 0;
  bool started_ = false;
};

heuristic::Weights clamp_weights(const std::array<double, 4>& raw);

}  // namespace tlink::rl
