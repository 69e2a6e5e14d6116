#include "tlink/engine/game_log.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace tlink {

using ordered_json = nlohmann::ordered_json;

GameLog make_log(const GameState& state, std::uint64_t seed) {
  GameLog log;
  log.player_count = state.player_count();
  log.seed = seed;
  log.moves = state.history();
  if (state.finished()) {
    for (int p = 0; p < state.player_count(); ++p) {
      log.final_scores.push_back(state.position().score(p).total);
    }
  }
  return log;
}

std::string to_json(const GameLog& log) {
  ordered_json j;
  j["version"] = log.version;
  j["playerCount"] = log.player_count;
  j["seed"] = log.seed;
  ordered_json moves = ordered_json::array();
  for (const auto& e : log.moves) {
    ordered_json m;
    m["player"] = e.player;
    if (e.skip) {
      m["skip"] = true;
    } else {
      m["templateId"] = e.move.template_id;
      m["column"] = e.move.column;
    }
    moves.push_back(std::move(m));
  }
  j["moves"] = std::move(moves);
  j["finalScores"] = log.final_scores;
  return j.dump();
}

GameLog log_from_json(const std::string& text) {
  try {
    const auto j = ordered_json::parse(text);
    GameLog log;
    log.version = j.at("version").get<int>();
    if (log.version != kLogVersion) throw GameError(ErrorCode::kCorruptLog, "unsupported log version");
    log.player_count = j.at("playerCount").get<int>();
    log.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& m : j.at("moves")) {
      HistoryEntry e;
      e.player = m.at("player").get<int>();
      e.skip = m.value("skip", false);
      if (!e.skip) {
        e.move.template_id = m.at("templateId").get<int>();
        e.move.column = m.at("column").get<int>();
      }
      log.moves.push_back(e);
    }
    if (j.contains("finalScores")) log.final_scores = j.at("finalScores").get<std::vector<int>>();
    return log;
  } catch (const nlohmann::json::exception& e) {
    throw GameError(ErrorCode::kCorruptLog, std::string("malformed game log: ") + e.what());
  }
}

GameState replay(const GameLog& log) {
  if (log.player_count < kMinPlayers || log.player_count > kMaxPlayers) {
    throw GameError(ErrorCode::kCorruptLog, "bad player count");
  }
  GameState state(log.player_count);
  for (std::size_t i = 0; i < log.moves.size(); ++i) {
    const auto& e = log.moves[i];
    if (e.skip) {
      // The engine already appended its own skip entries after the last move.
      if (i >= state.history().size() || !(state.history()[i] == e)) {
        throw GameError(ErrorCode::kCorruptLog, "skip entry disagrees with the rules");
      }
      continue;
    }
    if (state.history().size() != i) throw GameError(ErrorCode::kCorruptLog, "missing skip entry");
    if (state.finished() || e.player != state.current() || !state.is_legal(e.move)) {
      throw GameError(ErrorCode::kCorruptLog, "illegal move at entry " + std::to_string(i));
    }
    state.apply_unchecked(e.move);
  }
  if (state.history().size() != log.moves.size()) {
    throw GameError(ErrorCode::kCorruptLog, "log ends before recorded skips");
  }
  if (!log.final_scores.empty()) {
    if (!state.finished() || static_cast<int>(log.final_scores.size()) != log.player_count) {
      throw GameError(ErrorCode::kCorruptLog, "final scores given for an unfinished game");
    }
    for (int p = 0; p < log.player_count; ++p) {
      if (state.position().score(p).total != log.final_scores[p]) {
        throw GameError(ErrorCode::kCorruptLog, "final scores do not match the replay");
      }
    }
  }
  return state;
}

void write_logs(std::ostream& out, const std::vector<GameLog>& logs) {
  for (const auto& log : logs) out << to_json(log) << '\n';
}

std::vector<GameLog> read_logs(std::istream& in) {
  std::vector<GameLog> logs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    logs.push_back(log_from_json(line));
  }
  return logs;
}

std::vector<GameLog> read_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GameError(ErrorCode::kCorruptLog, "cannot open " + path);
  return read_logs(in);
}

void write_log_file(const std::string& path, const std::vector<GameLog>& logs) {
  std::ofstream out(path);
  if (!out) throw GameError(ErrorCode::kInvalidArgument, "cannot write " + path);
  write_logs(out, logs);
}

}  // namespace tlink
