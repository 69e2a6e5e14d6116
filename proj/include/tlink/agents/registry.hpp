#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tlink/engine/agent.hpp"
#include "tlink/mcts/mcts.hpp"

namespace tlink::agents {

struct AgentOptions {
  int think_ms = 100;
  std::int64_t iterations = 0;  // > 0 replaces the think time
  mcts::Variant variant = mcts::Variant::kUct;  // for plain "mcts"
  int beta = 250;
  int threads = 1;
  std::string profile_dir;   // empty: the shipped profiles directory
  std::string prefill_logs;  // game log file for "mcts-prefill"; empty: generated
  int prefill_games = 100;
};

// Builds an agent from "name" or "name:weightsFile". Names:
//   random, first, user, tuned, random-heuristic, heuristic:FILE,
//   mcts, mcts-uct, mcts-rave, mcts-poolrave (random playouts),
//   mcts-heuristic (UCT, user-heuristic playouts),
//   mcts-prefill (RAVE, random playouts, pre-filled from user-heuristic logs).
// Throws GameError(kInvalidArgument) for unknown names.
std::unique_ptr<Agent> make_agent(const std::string& spec, const AgentOptions& options = {});

std::vector<std::string> agent_names();

std::string default_profile_dir();

mcts::Variant parse_variant(const std::string& text);

}  // namespace tlink::agents
