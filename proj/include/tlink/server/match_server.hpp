#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "tlink/agents/registry.hpp"
#include "tlink/engine/agent.hpp"

namespace httplib {
class Server;
}

namespace tlink::server {

struct Seat {
  bool human = true;
  std::string agent;  // registry name for agent seats
};

struct ServerConfig {
  agents::AgentOptions agent_options;
  std::string log_dir;  // empty: no persistence
};

struct MoveReply {
  bool ok = false;
  int status = 200;
  std::string error;
  nlohmann::ordered_json state;
};

// One match. All mutations run on the match's own thread, in order; agent
// seats move there too, so network threads only queue work and wait.
class Match {
 public:
  Match(std::string id, std::vector<Seat> seats, std::uint64_t seed, const ServerConfig& config);
  ~Match();
  Match(const Match&) = delete;
  Match& operator=(const Match&) = delete;

  const std::string& id() const { return id_; }
  nlohmann::ordered_json state() const;
  std::uint64_t version() const;
  bool finished() const;

  MoveReply submit(int seat, int template_id, int column);

  // Blocks until the version moves past `seen`, the match ends or the
  // timeout expires. Returns the current version.
  std::uint64_t wait_for_change(std::uint64_t seen, std::chrono::milliseconds timeout) const;

  std::string log_line() const;

 private:
  void post(std::function<void()> task);
  void run();
  void after_change();
  nlohmann::ordered_json state_locked() const;

  const std::string id_;
  const std::vector<Seat> seats_;
  const std::uint64_t seed_;
  const ServerConfig config_;
  std::vector<std::unique_ptr<Agent>> agents_;
  Rng rng_;

  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  GameState game_;
  std::uint64_t version_ = 0;
  bool logged_ = false;

  std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::deque<std::function<void()>> queue_;
  bool stopping_ = false;
  std::thread worker_;
};

class MatchServer {
 public:
  explicit MatchServer(ServerConfig config = {});

  // Body: {"seats":[{"kind":"human"},{"kind":"agent","name":"tuned"}],"seed":1}
  // Throws GameError(kInvalidArgument).
  std::shared_ptr<Match> create(const nlohmann::json& body);
  std::shared_ptr<Match> find(const std::string& id) const;

  // Installs the HTTP routes on `http`.
  void mount(httplib::Server& http);

 private:
  ServerConfig config_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Match>> matches_;
  std::uint64_t next_id_ = 1;
};

// Runs the HTTP server until the process is stopped.
int serve(int port, const ServerConfig& config);

}  // namespace tlink::server
