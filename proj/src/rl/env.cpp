#include "tlink/rl/env.hpp"

#include <algorithm>
#include <cmath>

namespace tlink::rl {

RewardKind parse_reward(const std::string& text) {
  if (text == "guided") return RewardKind::kGuided;
  if (text == "score") return RewardKind::kScore;
  if (text == "simple") return RewardKind::kSimple;
  if (text == "heuristic") return RewardKind::kHeuristic;
  throw GameError(ErrorCode::kInvalidArgument, "unknown reward '" + text + "'");
}

std::string reward_name(RewardKind kind) {
  switch (kind) {
    case RewardKind::kGuided: return "guided";
    case RewardKind::kScore: return "score";
    case RewardKind::kSimple: return "simple";
    case RewardKind::kHeuristic: return "heuristic";
  }
  return "guided";
}

std::vector<double> observe(const GameState& state, int perspective) {
  std::vector<double> obs(kObservationSize, 0.0);
  const Board& board = state.board();
  const int other = 1 - perspective;
  for (int r = 0; r < kBoardHeight; ++r) {
    for (int c = 0; c < kBoardWidth; ++c) {
      if (board.piece_at(c, r) < 0) continue;
      const int owner = board.owner(c, r);
      const int plane = owner == perspective ? 0 : 1;
      obs[plane * kPlaneSize + r * kBoardWidth + c] = 1.0;
    }
  }
  for (int s = 0; s < kShapeCount; ++s) {
    obs[kInventoryOffset + s] = state.player(perspective).inventory[s] / 5.0;
    obs[kInventoryOffset + kShapeCount + s] = state.player(other).inventory[s] / 5.0;
  }
  obs[kScoreOffset] = state.position().score(perspective).total / 100.0;
  obs[kScoreOffset + 1] = state.position().score(other).total / 100.0;
  if (!state.finished() && state.current() == perspective) {
    thread_local std::vector<Move> legal;
    state.legal_moves(legal);
    for (const Move& m : legal) obs[kMaskOffset + m.action()] = 1.0;
  }
  return obs;
}

heuristic::Weights clamp_weights(const std::array<double, 4>& raw) {
  std::array<double, 4> w{};
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(raw[i])) throw GameError(ErrorCode::kInvalidArgument, "weights must be finite");
    w[i] = std::clamp(raw[i], 0.0, heuristic::kMaxWeight);
  }
  return {w[0], w[1], w[2], w[3]};
}

std::vector<double> TetrisLinkEnv::reset(std::uint64_t seed, std::unique_ptr<Agent> opponent, bool agent_first) {
  if (!opponent) opponent = std::make_unique<RandomAgent>();
  opponent_ = std::move(opponent);
  rng_ = Rng(seed);
  state_ = GameState(2);
  agent_ = agent_first ? 0 : 1;
  steps_ = 0;
  started_ = true;
  opponent_moves();
  return observation();
}

// The quantity whose per-step change is the reward.
double TetrisLinkEnv::quantity() const {
  const Position& pos = state_.position();
  const int score = pos.score(agent_).total;
  const int group = pos.connected_pieces(agent_);
  switch (config_.reward) {
    case RewardKind::kGuided: return (score + group) / 100.0;
    case RewardKind::kScore: return score / 100.0;
    case RewardKind::kHeuristic: return ((score - pos.score(1 - agent_).total) + group) / 100.0;
    case RewardKind::kSimple: return 0.0;
  }
  return 0.0;
}

void TetrisLinkEnv::opponent_moves() {
  while (!state_.finished() && state_.current() != agent_) state_.apply(opponent_->choose(state_, rng_));
}

StepResult TetrisLinkEnv::result(double reward, bool illegal) const {
  StepResult r;
  r.observation = observation();
  r.reward = reward;
  r.done = state_.finished();
  r.info.illegal_attempt = illegal;
  r.info.score = state_.position().score(agent_).total;
  r.info.group_size = state_.position().connected_pieces(agent_);
  int legal = 0;
  for (int i = 0; i < kActionCount; ++i) legal += r.observation[kMaskOffset + i] != 0.0;
  r.info.legal_count = legal;
  return r;
}

StepResult TetrisLinkEnv::step(int action) {
  if (!started_ || state_.finished()) throw GameError(ErrorCode::kEpisodeFinished, "episode finished");
  if (action < 0 || action >= kActionCount) throw GameError(ErrorCode::kInvalidArgument, "action out of range");
  const Move move = Move::from_action(action);
  if (!state_.is_legal(move)) {
    // Scolded: nothing moves, including the opponent.
    const double scold = config_.reward == RewardKind::kGuided ? config_.scolding : 0.0;
    const double base = config_.delta || config_.reward == RewardKind::kSimple ? 0.0 : quantity();
    return result(base - scold, true);
  }
  const double before = quantity();
  state_.apply(move);
  ++steps_;
  opponent_moves();
  double reward = 0.0;
  if (config_.reward == RewardKind::kSimple) {
    if (state_.finished()) {
      const double v = outcome_values(state_)[agent_];
      reward = v == 1.0 ? 1.0 : v == 0.0 ? -1.0 : 0.0;
    }
  } else {
    reward = config_.delta ? quantity() - before : quantity();
  }
  return result(reward, false);
}

StepResult TetrisLinkEnv::step_weights(const std::array<double, 4>& weights) {
  if (!started_ || state_.finished()) throw GameError(ErrorCode::kEpisodeFinished, "episode finished");
  const Move m = heuristic::choose_move(state_, clamp_weights(weights), rng_);
  return step(m.action());
}

}  // namespace tlink::rl
