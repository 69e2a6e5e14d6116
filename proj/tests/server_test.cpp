#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "tlink/engine/game_log.hpp"
#include "tlink/server/match_server.hpp"

using namespace tlink;
using namespace tlink::server;
using nlohmann::json;

namespace {

class ServerFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    log_dir_ = std::filesystem::temp_directory_path() / ("tlink_server_test_" + std::to_string(::getpid()));
    std::filesystem::remove_all(log_dir_);
    ServerConfig cfg;
    cfg.agent_options.think_ms = 20;
    cfg.log_dir = log_dir_.string();
    matches_ = std::make_unique<MatchServer>(cfg);
    matches_->mount(http_);
    port_ = http_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { http_.listen_after_bind(); });
    http_.wait_until_ready();
  }
  void TearDown() override {
    http_.stop();
    thread_.join();
    matches_.reset();
    std::filesystem::remove_all(log_dir_);
  }

  httplib::Client client() {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(30, 0);
    return c;
  }

  std::string create(const json& body) {
    auto res = client().Post("/match", body.dump(), "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    return json::parse(res->body)["matchId"];
  }

  json state(const std::string& id) {
    auto res = client().Get("/match/" + id);
    EXPECT_EQ(res->status, 200);
    return json::parse(res->body);
  }

  json wait_until(const std::string& id, const std::function<bool(const json&)>& pred) {
    for (int i = 0; i < 3000; ++i) {
      const auto s = state(id);
      if (pred(s)) return s;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ADD_FAILURE() << "timed out";
    return state(id);
  }

  std::filesystem::path log_dir_;
  std::unique_ptr<MatchServer> matches_;
  httplib::Server http_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace

TEST_F(ServerFixture, HumanAgainstHeuristicGetsReplies) {
  const auto id = create({{"seats", {{{"kind", "human"}}, {{"kind", "agent"}, {"name", "user"}}}}, {"seed", 3}});
  auto s = state(id);
  EXPECT_EQ(s["board"].size(), 20u);
  EXPECT_EQ(s["board"][0].size(), 10u);
  EXPECT_EQ(s["legalMoves"].size(), 162u);
  EXPECT_EQ(s["current"], 0);
  for (int move = 0; move < 3; ++move) {
    const auto m = s["legalMoves"][0];
    auto res = client().Post("/match/" + id + "/move",
                             json{{"seat", 0}, {"templateId", m["templateId"]}, {"column", m["column"]}}.dump(),
                             "application/json");
    ASSERT_EQ(res->status, 200) << res->body;
    EXPECT_TRUE(json::parse(res->body)["ok"]);
    s = wait_until(id, [&](const json& st) { return st["finished"] || (st["current"] == 0 && st["turn"] == 2 * (move + 1)); });
    if (s["finished"]) break;
    EXPECT_EQ(s["lastMove"]["player"], 1);
  }
}

TEST_F(ServerFixture, EventStreamDeliversAgentReplies) {
  const auto id = create({{"seats", {{{"kind", "human"}}, {{"kind", "agent"}, {"name", "random"}}}}, {"seed", 1}});
  std::vector<json> events;
  std::thread listener([&] {
    std::string buffer;
    client().Get("/match/" + id + "/events", [&](const char* data, std::size_t len) {
      buffer.append(data, len);
      std::size_t pos;
      while ((pos = buffer.find("\n\n")) != std::string::npos) {
        const std::string block = buffer.substr(0, pos);
        buffer.erase(0, pos + 2);
        const auto d = block.find("data: ");
        if (d != std::string::npos) events.push_back(json::parse(block.substr(d + 6)));
      }
      return events.empty() || events.back()["turn"].get<int>() < 2;
    });
  });
  // Give the stream a moment to attach, then move.
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  client().Post("/match/" + id + "/move", json{{"seat", 0}, {"templateId", 2}, {"column", 0}}.dump(), "application/json");
  listener.join();
  ASSERT_FALSE(events.empty());
  EXPECT_EQ(events.back()["turn"], 2);
  EXPECT_EQ(events.back()["current"], 0);
  for (std::size_t i = 1; i < events.size(); ++i) EXPECT_GT(events[i]["version"], events[i - 1]["version"]);
}

TEST_F(ServerFixture, RejectsBadMovesWithoutChangingState) {
  const auto id = create({{"seats", {{{"kind", "human"}}, {{"kind", "human"}}}}});
  const auto before = state(id);
  auto post = [&](const json& body) { return client().Post("/match/" + id + "/move", body.dump(), "application/json"); };
  auto res = post({{"seat", 0}, {"templateId", 2}, {"column", 9}});  // O needs two columns
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body)["error"], "illegal move");
  EXPECT_EQ(post({{"seat", 0}, {"templateId", 99}, {"column", 0}})->status, 400);
  EXPECT_EQ(post({{"seat", 0}, {"templateId", 0}, {"column", -1}})->status, 400);
  EXPECT_EQ(post({{"seat", 1}, {"templateId", 0}, {"column", 0}})->status, 409);
  EXPECT_EQ(post({{"seat", 5}, {"templateId", 0}, {"column", 0}})->status, 400);
  EXPECT_EQ(post({{"seat", 0}})->status, 400);
  EXPECT_EQ(client().Post("/match/" + id + "/move", "{", "application/json")->status, 400);
  EXPECT_EQ(state(id), before);
  EXPECT_EQ(post({{"seat", 0}, {"templateId", 2}, {"column", 8}})->status, 200);
  EXPECT_EQ(state(id)["current"], 1);
}

TEST_F(ServerFixture, AgentSeatCannotBeDriven) {
  const auto id = create({{"seats", {{{"kind", "agent"}, {"name", "first"}}, {{"kind", "human"}}}}});
  wait_until(id, [](const json& s) { return s["current"] == 1; });
  auto res = client().Post("/match/" + id + "/move", json{{"seat", 0}, {"templateId", 0}, {"column", 0}}.dump(),
                           "application/json");
  EXPECT_EQ(res->status, 400);
}

TEST_F(ServerFixture, UnknownMatchAndBadCreate) {
  EXPECT_EQ(client().Get("/match/nope")->status, 404);
  EXPECT_EQ(client().Post("/match/nope/move", "{}", "application/json")->status, 404);
  EXPECT_EQ(client().Get("/match/nope/events")->status, 404);
  EXPECT_EQ(client().Post("/match", "{}", "application/json")->status, 400);
  EXPECT_EQ(client().Post("/match", R"({"seats":[{"kind":"human"}]})", "application/json")->status, 400);
  EXPECT_EQ(client().Post("/match", R"({"seats":[{"kind":"agent","name":"zzz"},{"kind":"human"}]})",
                          "application/json")
                ->status,
            400);
  EXPECT_EQ(client().Get("/health")->status, 200);
}

TEST_F(ServerFixture, FourAgentsPlayToEndAndLogReplays) {
  const auto id = create({{"seats",
                           {{{"kind", "agent"}, {"name", "random"}},
                            {{"kind", "agent"}, {"name", "first"}},
                            {{"kind", "agent"}, {"name", "user"}},
                            {{"kind", "agent"}, {"name", "random-heuristic"}}}},
                          {"seed", 9}});
  const auto final_state = wait_until(id, [](const json& s) { return s["finished"].get<bool>(); });
  EXPECT_TRUE(final_state["legalMoves"].empty());
  EXPECT_FALSE(final_state["winners"].empty());
  auto res = client().Get("/match/" + id + "/log");
  ASSERT_EQ(res->status, 200);
  const GameLog log = log_from_json(res->body);
  EXPECT_EQ(log.player_count, 4);
  const GameState replayed = replay(log);
  for (int p = 0; p < 4; ++p) EXPECT_EQ(replayed.position().score(p).total, final_state["scores"][p]);
  // Persisted to the log directory as well.
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  const auto persisted = read_log_file((log_dir_ / "matches.jsonl").string());
  ASSERT_EQ(persisted.size(), 1u);
  EXPECT_EQ(replay(persisted[0]).board(), replayed.board());
}
