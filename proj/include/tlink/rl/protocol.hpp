#pragma once

#include <atomic>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "tlink/rl/env.hpp"

namespace tlink::rl {

// One environment behind the line protocol. Requests:
//   {"cmd":"reset","seed":1,"opponent":"random","reward":"guided","agentFirst":true,"delta":true}
//   {"cmd":"step","action":17}
//   {"cmd":"step","weights":[1,2,3,4]}
//   {"cmd":"close"}
// Replies:
//   {"ok":true,"obs":[...],"reward":0.0,"done":false,"info":{...}}
//   {"ok":false,"error":"..."}
class EnvSession {
 public:
  std::string handle(const std::string& line);
  bool closed() const { return closed_; }

 private:
  std::unique_ptr<TetrisLinkEnv> env_;
  bool closed_ = false;
};

// Serves requests line by line until "close" or end of input.
void serve_stream(std::istream& in, std::ostream& out);

// Local TCP listener, one environment per connection.
class TcpEnvServer {
 public:
  // Port 0 picks a free port; see port().
  explicit TcpEnvServer(int port, const std::string& host = "127.0.0.1");
  ~TcpEnvServer();
  TcpEnvServer(const TcpEnvServer&) = delete;
  TcpEnvServer& operator=(const TcpEnvServer&) = delete;

  int port() const { return port_; }
  // Accepts connections until stop().
  void run();
  void stop();

 private:
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::vector<std::thread> connections_;
};

// Blocking line client for the TCP transport.
class LineClient {
 public:
  LineClient(const std::string& host, int port);
  ~LineClient();
  LineClient(const LineClient&) = delete;
  LineClient& operator=(const LineClient&) = delete;

  void send_line(const std::string& line);
  // Empty optional-like: returns false at end of stream.
  bool read_line(std::string& line);
  std::string request(const std::string& line);

 private:
  int fd_ = -1;
  std::string buffer_;
};

}  // namespace tlink::rl
