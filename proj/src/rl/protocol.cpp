#include "tlink/rl/protocol.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "tlink/agents/registry.hpp"

namespace tlink::rl {

namespace {

using nlohmann::json;

std::string error_reply(const std::string& what) { return json{{"ok", false}, {"error", what}}.dump(); }

std::string step_reply(const StepResult& r) {
  json j;
  j["ok"] = true;
  j["obs"] = r.observation;
  j["reward"] = r.reward;
  j["done"] = r.done;
  j["info"] = {{"illegalAttempt", r.info.illegal_attempt},
               {"score", r.info.score},
               {"groupSize", r.info.group_size},
               {"legalCount", r.info.legal_count}};
  return j.dump();
}

bool write_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

// Reads one '\n'-terminated line into `line`, keeping leftovers in `buffer`.
bool read_socket_line(int fd, std::string& buffer, std::string& line) {
  for (;;) {
    const auto nl = buffer.find('\n');
    if (nl != std::string::npos) {
      line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      return true;
    }
    char chunk[65536];
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n <= 0) return false;
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

GameError socket_error(const std::string& what) {
  return GameError(ErrorCode::kProtocolError, what + ": " + std::strerror(errno));
}

}  // namespace

std::string EnvSession::handle(const std::string& line) {
  json req;
  try {
    req = json::parse(line);
  } catch (const json::exception&) {
    return error_reply("malformed request");
  }
  if (!req.is_object() || !req.contains("cmd") || !req["cmd"].is_string()) return error_reply("missing cmd");
  const std::string cmd = req["cmd"];
  try {
    if (cmd == "close") {
      closed_ = true;
      return json{{"ok", true}}.dump();
    }
    if (cmd == "reset") {
      EnvConfig cfg;
      cfg.reward = parse_reward(req.value("reward", std::string("guided")));
      cfg.delta = req.value("delta", true);
      const auto seed = req.value("seed", std::uint64_t{0});
      const std::string opponent = req.value("opponent", std::string("random"));
      const bool agent_first = req.value("agentFirst", true);
      auto opp = agents::make_agent(opponent);
      env_ = std::make_unique<TetrisLinkEnv>(cfg);
      StepResult r;
      r.observation = env_->reset(seed, std::move(opp), agent_first);
      r.done = env_->done();
      return step_reply(r);
    }
    if (cmd == "step") {
      if (!env_) return error_reply("reset first");
      if (req.contains("weights")) {
        const auto& w = req["weights"];
        if (!w.is_array() || w.size() != 4) return error_reply("weights must be four numbers");
        std::array<double, 4> raw{};
        for (int i = 0; i < 4; ++i) {
          if (!w[i].is_number()) return error_reply("weights must be four numbers");
          raw[i] = w[i].get<double>();
        }
        return step_reply(env_->step_weights(raw));
      }
      if (!req.contains("action") || !req["action"].is_number_integer()) return error_reply("missing action");
      const auto action = req["action"].get<std::int64_t>();
      if (action < 0 || action >= kActionCount) return error_reply("action out of range");
      return step_reply(env_->step(static_cast<int>(action)));
    }
    return error_reply("unknown cmd '" + cmd + "'");
  } catch (const GameError& e) {
    return error_reply(e.what());
  } catch (const json::exception& e) {
    return error_reply(std::string("bad field: ") + e.what());
  }
}

void serve_stream(std::istream& in, std::ostream& out) {
  EnvSession session;
  std::string line;
  while (!session.closed() && std::getline(in, line)) {
    if (line.empty()) continue;
    out << session.handle(line) << '\n';
    out.flush();
  }
}

TcpEnvServer::TcpEnvServer(int port, const std::string& host) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw socket_error("socket");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw GameError(ErrorCode::kInvalidArgument, "bad host " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 16) < 0) {
    const auto err = socket_error("bind");
    ::close(listen_fd_);
    throw err;
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpEnvServer::~TcpEnvServer() {
  stop();
  std::lock_guard<std::mutex> lock(mutex_);
  for (auto& t : connections_) {
    if (t.joinable()) t.join();
  }
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void TcpEnvServer::stop() { stopping_ = true; }

void TcpEnvServer::run() {
  while (!stopping_) {
    pollfd p{listen_fd_, POLLIN, 0};
    if (::poll(&p, 1, 100) <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    std::lock_guard<std::mutex> lock(mutex_);
    connections_.emplace_back([fd] {
      EnvSession session;
      std::string buffer, line;
      while (!session.closed() && read_socket_line(fd, buffer, line)) {
        if (line.empty()) continue;
        if (!write_all(fd, session.handle(line) + "\n")) break;
      }
      ::close(fd);
    });
  }
}

LineClient::LineClient(const std::string& host, int port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw socket_error("socket");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  ::inet_pton(AF_INET, host.c_str(), &addr.sin_addr);
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    const auto err = socket_error("connect");
    ::close(fd_);
    throw err;
  }
}

LineClient::~LineClient() {
  if (fd_ >= 0) ::close(fd_);
}

void LineClient::send_line(const std::string& line) {
  if (!write_all(fd_, line + "\n")) throw socket_error("send");
}

bool LineClient::read_line(std::string& line) { return read_socket_line(fd_, buffer_, line); }

std::string LineClient::request(const std::string& line) {
  send_line(line);
  std::string reply;
  if (!read_line(reply)) throw GameError(ErrorCode::kProtocolError, "connection closed");
  return reply;
}

}  // namespace tlink::rl
