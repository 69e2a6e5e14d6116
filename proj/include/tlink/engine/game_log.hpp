#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tlink/engine/game_state.hpp"

namespace tlink {

inline constexpr int kLogVersion = 1;

// The shared match record. Serialized as one line of JSON:
//   {"version":1,"playerCount":2,"seed":7,
//    "moves":[{"player":0,"templateId":3,"column":4},{"player":1,"skip":true}],
//    "finalScores":[5,-2]}
// finalScores is empty for unfinished matches.
struct GameLog {
  int version = kLogVersion;
  int player_count = 2;
  std::uint64_t seed = 0;
  std::vector<HistoryEntry> moves;
  std::vector<int> final_scores;
};

GameLog make_log(const GameState& state, std::uint64_t seed);

std::string to_json(const GameLog& log);
// Throws GameError(kCorruptLog) on malformed input.
GameLog log_from_json(const std::string& text);

// Replays every entry through the engine; skip entries must match the
// engine's own skip decisions and final scores must match. Throws kCorruptLog.
GameState replay(const GameLog& log);

// One record per line.
void write_logs(std::ostream& out, const std::vector<GameLog>& logs);
std::vector<GameLog> read_logs(std::istream& in);
std::vector<GameLog> read_log_file(const std::string& path);
void write_log_file(const std::string& path, const std::vector<GameLog>& logs);

}  // namespace tlink
