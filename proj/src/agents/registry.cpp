#include "tlink/agents/registry.hpp"

#include <filesystem>

#include "tlink/engine/board.hpp"
#include "tlink/engine/game_log.hpp"
#include "tlink/heuristic/heuristic.hpp"
#include "tlink/heuristic/tuner.hpp"
#include "tlink/mcts/tetris.hpp"

#ifndef TLINK_PROFILE_DIR
#define TLINK_PROFILE_DIR "profiles"
#endif

namespace tlink::agents {

namespace {

GameError unknown(const std::string& what) { return GameError(ErrorCode::kInvalidArgument, what); }

std::vector<GameLog> user_self_play(int games) {
  heuristic::HeuristicAgent a("user", heuristic::kUserWeights), b("user", heuristic::kUserWeights);
  Agent* seats[2] = {&a, &b};
  std::vector<GameLog> logs;
  for (int g = 0; g < games; ++g) {
    Rng rng = split_rng(0x5eed, static_cast<std::uint64_t>(g));
    logs.push_back(make_log(play_match(seats, rng), 0x5eed));
  }
  return logs;
}

}  // namespace

std::string default_profile_dir() {
  if (const char* env = std::getenv("TLINK_PROFILE_DIR")) return env;
  return TLINK_PROFILE_DIR;
}

mcts::Variant parse_variant(const std::string& text) {
  if (text == "uct") return mcts::Variant::kUct;
  if (text == "rave") return mcts::Variant::kRave;
  if (text == "poolrave") return mcts::Variant::kPoolRave;
  throw unknown("unknown variant '" + text + "' (uct, rave, poolrave)");
}

std::vector<std::string> agent_names() {
  return {"random", "first", "user", "tuned", "random-heuristic", "heuristic:FILE", "mcts", "mcts-uct",
          "mcts-rave", "mcts-poolrave", "mcts-heuristic", "mcts-prefill"};
}

std::unique_ptr<Agent> make_agent(const std::string& spec, const AgentOptions& options) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string file = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const std::string dir = options.profile_dir.empty() ? default_profile_dir() : options.profile_dir;

  if (name == "random") return std::make_unique<RandomAgent>();
  if (name == "first") return std::make_unique<FirstMoveAgent>();
  if (name == "random-heuristic") {
    return std::make_unique<heuristic::HeuristicAgent>(heuristic::HeuristicAgent::random_weighted());
  }
  if (name == "user" || name == "tuned" || name == "heuristic") {
    std::string path = file;
    if (path.empty() && name == "heuristic") throw unknown("heuristic needs a weights file: heuristic:FILE");
    if (path.empty()) path = (std::filesystem::path(dir) / (name + ".json")).string();
    if (name == "user" && file.empty() && !std::filesystem::exists(path)) {
      return std::make_unique<heuristic::HeuristicAgent>("user", heuristic::kUserWeights);
    }
    const auto profile = heuristic::load_profile(path);
    return std::make_unique<heuristic::HeuristicAgent>(name, profile.weights);
  }

  mcts::TetrisConfig cfg;
  cfg.think_time = std::chrono::milliseconds(options.think_ms);
  cfg.max_iterations = options.iterations;
  if (options.iterations > 0) cfg.think_time = std::chrono::milliseconds(0);
  cfg.beta = options.beta;
  cfg.threads = options.threads;
  if (name == "mcts") {
    cfg.variant = options.variant;
    return std::make_unique<mcts::MctsAgent>(spec, cfg);
  }
  if (name == "mcts-uct" || name == "mcts-rave" || name == "mcts-poolrave") {
    cfg.variant = parse_variant(name.substr(5));
    return std::make_unique<mcts::MctsAgent>(spec, cfg);
  }
  if (name == "mcts-heuristic") {
    cfg.playout = mcts::heuristic_playout(heuristic::kUserWeights);
    return std::make_unique<mcts::MctsAgent>(spec, cfg);
  }
  if (name == "mcts-prefill") {
    // Random playouts: heuristic ones manage only a few dozen iterations
    // per move at interactive think times.
    cfg.variant = mcts::Variant::kRave;
    std::vector<GameLog> logs = !file.empty()                   ? read_log_file(file)
                                : !options.prefill_logs.empty() ? read_log_file(options.prefill_logs)
                                                                : user_self_play(options.prefill_games);
    return std::make_unique<mcts::MctsAgent>(spec, cfg, std::move(logs));
  }
  throw unknown("unknown agent '" + spec + "'");
}

}  // namespace tlink::agents
