#include "tlink/server/match_server.hpp"

#include <filesystem>
#include <fstream>
#include <future>

#include "httplib.h"
#include "tlink/engine/board.hpp"
#include "tlink/engine/game_log.hpp"

namespace tlink::server {

using nlohmann::json;
using nlohmann::ordered_json;

Match::Match(std::string id, std::vector<Seat> seats, std::uint64_t seed, const ServerConfig& config)
    : id_(std::move(id)), seats_(std::move(seats)), seed_(seed), config_(config), rng_(seed),
      game_(static_cast<int>(seats_.size())) {
  for (const Seat& s : seats_) {
    agents_.push_back(s.human ? nullptr : agents::make_agent(s.agent, config_.agent_options));
  }
  worker_ = std::thread([this] { run(); });
  post([this] { after_change(); });
}

Match::~Match() {
  {
    std::lock_guard<std::mutex> lock(queue_mutex_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  worker_.join();
}

void Match::post(std::function<void()> task) {
  {
    std::lock_guard<std::mutex> lock(queue_mutex_);
    queue_.push_back(std::move(task));
  }
  queue_cv_.notify_one();
}

void Match::run() {
  for (;;) {
    std::function<void()> task;
    {
      std::unique_lock<std::mutex> lock(queue_mutex_);
      queue_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      task = std::move(queue_.front());
      queue_.pop_front();
    }
    task();
  }
}

// Runs on the match thread after every state change.
void Match::after_change() {
  bool agent_turn = false;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    ++version_;
    if (game_.finished() && !logged_ && !config_.log_dir.empty()) {
      std::filesystem::create_directories(config_.log_dir);
      std::ofstream out(std::filesystem::path(config_.log_dir) / "matches.jsonl", std::ios::app);
      out << to_json(make_log(game_, seed_)) << '\n';
      logged_ = true;
    }
    agent_turn = !game_.finished() && !seats_[game_.current()].human;
  }
  changed_.notify_all();
  if (!agent_turn) return;
  post([this] {
    GameState snapshot;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      snapshot = game_;
    }
    const Move m = agents_[snapshot.current()]->choose(snapshot, rng_);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      game_.apply(m);
    }
    after_change();
  });
}

MoveReply Match::submit(int seat, int template_id, int column) {
  auto promise = std::make_shared<std::promise<MoveReply>>();
  auto future = promise->get_future();
  post([this, promise, seat, template_id, column] {
    MoveReply reply;
    bool applied = false;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (game_.finished()) {
        reply = {false, 409, "match finished", {}};
      } else if (seat < 0 || seat >= static_cast<int>(seats_.size())) {
        reply = {false, 400, "no such seat", {}};
      } else if (!seats_[seat].human) {
        reply = {false, 400, "seat is played by an agent", {}};
      } else if (seat != game_.current()) {
        reply = {false, 409, "not this seat's turn", {}};
      } else if (template_id < 0 || template_id >= kTemplateCount || !game_.is_legal(Move{template_id, column})) {
        reply = {false, 400, "illegal move", {}};
      } else {
        game_.apply(Move{template_id, column});
        applied = true;
        reply.ok = true;
      }
      if (!applied) reply.state = state_locked();
    }
    if (applied) {
      after_change();
      std::lock_guard<std::mutex> lock(mutex_);
      reply.state = state_locked();
    }
    promise->set_value(std::move(reply));
  });
  return future.get();
}

std::uint64_t Match::version() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return version_;
}

bool Match::finished() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return game_.finished();
}

std::uint64_t Match::wait_for_change(std::uint64_t seen, std::chrono::milliseconds timeout) const {
  std::unique_lock<std::mutex> lock(mutex_);
  changed_.wait_for(lock, timeout, [&] { return version_ > seen; });
  return version_;
}

ordered_json Match::state() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return state_locked();
}

ordered_json Match::state_locked() const {
  ordered_json j;
  j["matchId"] = id_;
  j["version"] = version_;
  j["playerCount"] = game_.player_count();
  j["seats"] = ordered_json::array();
  for (const Seat& s : seats_) {
    j["seats"].push_back(s.human ? ordered_json{{"kind", "human"}} : ordered_json{{"kind", "agent"}, {"name", s.agent}});
  }
  // Rows bottom first, each left to right.
  j["board"] = ordered_json::array();
  for (int r = 0; r < kBoardHeight; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < kBoardWidth; ++c) {
      if (game_.board().piece_at(c, r) < 0) row.push_back(nullptr);
      else row.push_back(game_.board().owner(c, r));
    }
    j["board"].push_back(row);
  }
  j["inventories"] = ordered_json::array();
  j["scores"] = ordered_json::array();
  j["scoreDetail"] = ordered_json::array();
  for (int p = 0; p < game_.player_count(); ++p) {
    const auto& inv = game_.player(p).inventory;
    j["inventories"].push_back(std::vector<int>(inv.begin(), inv.end()));
    const auto s = game_.position().score(p);
    j["scores"].push_back(s.total);
    j["scoreDetail"].push_back({{"groupPoints", s.group_points}, {"minusPoints", s.minus_points}, {"total", s.total}});
  }
  j["current"] = game_.current();
  j["turn"] = game_.turn();
  j["finished"] = game_.finished();
  j["legalMoves"] = ordered_json::array();
  if (!game_.finished()) {
    for (const Move& m : game_.legal_moves()) j["legalMoves"].push_back({{"templateId", m.template_id}, {"column", m.column}});
  }
  j["winners"] = game_.finished() ? ordered_json(winner(game_).winners) : ordered_json::array();
  const auto& h = game_.history();
  auto last = std::find_if(h.rbegin(), h.rend(), [](const HistoryEntry& e) { return !e.skip; });
  j["lastMove"] = last == h.rend() ? ordered_json(nullptr)
                                   : ordered_json{{"player", last->player},
                                                  {"templateId", last->move.template_id},
                                                  {"column", last->move.column}};
  return j;
}

std::string Match::log_line() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return to_json(make_log(game_, seed_));
}

MatchServer::MatchServer(ServerConfig config) : config_(std::move(config)) {}

std::shared_ptr<Match> MatchServer::create(const json& body) {
  auto bad = [](const std::string& what) { return GameError(ErrorCode::kInvalidArgument, what); };
  if (!body.is_object() || !body.contains("seats") || !body["seats"].is_array()) throw bad("seats missing");
  const auto& seats_json = body["seats"];
  if (seats_json.size() < kMinPlayers || seats_json.size() > kMaxPlayers) throw bad("need 2 to 4 seats");
  std::vector<Seat> seats;
  for (const auto& s : seats_json) {
    if (!s.is_object()) throw bad("seat must be an object");
    const std::string kind = s.value("kind", std::string("human"));
    if (kind == "human") {
      seats.push_back({true, ""});
    } else if (kind == "agent") {
      seats.push_back({false, s.value("name", std::string("random"))});
    } else {
      throw bad("seat kind must be human or agent");
    }
  }
  const std::uint64_t seed = body.value("seed", std::uint64_t{0});
  std::string id;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    id = "m" + std::to_string(next_id_++);
  }
  auto match = std::make_shared<Match>(id, std::move(seats), seed, config_);
  std::lock_guard<std::mutex> lock(mutex_);
  matches_[id] = match;
  return match;
}

std::shared_ptr<Match> MatchServer::find(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = matches_.find(id);
  return it == matches_.end() ? nullptr : it->second;
}

namespace {

void send_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& what) {
  send_json(res, status, {{"ok", false}, {"error", what}});
}

}  // namespace

void MatchServer::mount(httplib::Server& http) {
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                            {"Access-Control-Allow-Headers", "Content-Type"},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  http.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  http.Get("/health", [](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"ok", true}}); });

  http.Get("/agents", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"agents", agents::agent_names()}});
  });

  http.Post("/match", [this](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      return send_error(res, 400, "malformed body");
    }
    try {
      auto match = create(body);
      send_json(res, 201, {{"ok", true}, {"matchId", match->id()}});
    } catch (const GameError& e) {
      send_error(res, 400, e.what());
    }
  });

  http.Get(R"(/match/([A-Za-z0-9]+))", [this](const httplib::Request& req, httplib::Response& res) {
    auto match = find(req.matches[1]);
    if (!match) return send_error(res, 404, "no such match");
    send_json(res, 200, match->state());
  });

  http.Get(R"(/match/([A-Za-z0-9]+)/log)", [this](const httplib::Request& req, httplib::Response& res) {
    auto match = find(req.matches[1]);
    if (!match) return send_error(res, 404, "no such match");
    res.set_content(match->log_line() + "\n", "application/x-ndjson");
  });

  http.Post(R"(/match/([A-Za-z0-9]+)/move)", [this](const httplib::Request& req, httplib::Response& res) {
    auto match = find(req.matches[1]);
    if (!match) return send_error(res, 404, "no such match");
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      return send_error(res, 400, "malformed body");
    }
    if (!body.is_object() || !body.contains("seat") || !body.contains("templateId") || !body.contains("column") ||
        !body["seat"].is_number_integer() || !body["templateId"].is_number_integer() ||
        !body["column"].is_number_integer()) {
      return send_error(res, 400, "seat, templateId and column are required integers");
    }
    const auto reply = match->submit(body["seat"], body["templateId"], body["column"]);
    ordered_json out{{"ok", reply.ok}};
    if (!reply.ok) out["error"] = reply.error;
    out["state"] = reply.state;
    send_json(res, reply.status, out);
  });

  // Server-sent events: the state object after every change.
  http.Get(R"(/match/([A-Za-z0-9]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
    auto match = find(req.matches[1]);
    if (!match) return send_error(res, 404, "no such match");
    auto seen = std::make_shared<std::uint64_t>(0);
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider("text/event-stream", [match, seen](std::size_t, httplib::DataSink& sink) {
      const std::uint64_t now = match->wait_for_change(*seen, std::chrono::seconds(1));
      if (now == *seen) {
        const std::string ping = ": keep-alive\n\n";
        return sink.write(ping.data(), ping.size());
      }
      const auto state = match->state();
      *seen = state["version"].get<std::uint64_t>();
      const std::string event = "event: state\ndata: " + state.dump() + "\n\n";
      if (!sink.write(event.data(), event.size())) return false;
      if (state["finished"].get<bool>()) sink.done();
      return true;
    });
  });
}

int serve(int port, const ServerConfig& config) {
  MatchServer matches(config);
  httplib::Server http;
  matches.mount(http);
  return http.listen("0.0.0.0", port) ? 0 : 1;
}

}  // namespace tlink::server
