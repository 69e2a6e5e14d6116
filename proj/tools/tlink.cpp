// Command-line entry point for experiments, benchmarks and servers.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tlink/agents/registry.hpp"
#include "tlink/analysis/analysis.hpp"
#include "tlink/engine/game_log.hpp"
#include "tlink/heuristic/tuner.hpp"
#include "tlink/hex/hex.hpp"
#include "tlink/mcts/tetris.hpp"
#include "tlink/rating/rating.hpp"
#include "tlink/rl/protocol.hpp"
#include "tlink/server/match_server.hpp"

using namespace tlink;

namespace {

struct Common {
  std::string agent = "random";
  int games = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  int think_ms = 100;
  std::string variant = "uct";
  int beta = 250;
  std::int64_t mcts_iterations = 0;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--agent", c.agent, "Agent name[:weightsFile]");
  app->add_option("--games", c.games, "Number of games")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--think-ms", c.think_ms, "MCTS think time per move")->check(CLI::PositiveNumber);
  app->add_option("--variant", c.variant, "MCTS variant")->check(CLI::IsMember({"uct", "rave", "poolrave"}));
  app->add_option("--beta", c.beta, "RAVE beta")->check(CLI::PositiveNumber);
  app->add_option("--mcts-iterations", c.mcts_iterations, "MCTS iterations per move, replaces --think-ms");
  app->add_option("--out", c.out, "Output file");
}

agents::AgentOptions options_of(const Common& c) {
  agents::AgentOptions o;
  o.think_ms = c.think_ms;
  o.variant = agents::parse_variant(c.variant);
  o.beta = c.beta;
  o.iterations = c.mcts_iterations;
  return o;
}

analysis::AgentFactory factory_of(const std::string& spec, const agents::AgentOptions& o) {
  agents::make_agent(spec, o);  // fail early on bad names
  return [spec, o] { return agents::make_agent(spec, o); };
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw GameError(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << text;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  const auto dash = text.find('-');
  if (dash != std::string::npos && text.find(',') == std::string::npos) {
    for (int n = std::stoi(text.substr(0, dash)); n <= std::stoi(text.substr(dash + 1)); ++n) sizes.push_back(n);
    return sizes;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) sizes.push_back(std::stoi(item));
  return sizes;
}

int env_port(int fallback) {
  if (const char* p = std::getenv("PORT")) return std::atoi(p);
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tetris Link engine and AI lab"};
  app.require_subcommand(1);

  Common sim;
  std::string opponent;
  auto* simulate = app.add_subcommand("simulate", "Self-play batches, writes game logs");
  add_common(simulate, sim);
  simulate->add_option("--opponent", opponent, "Second seat agent (default: same as --agent)");

  Common br;
  auto* branching = app.add_subcommand("branching", "Legal moves per turn over self-play games");
  add_common(branching, br);

  Common fm;
  int prefix = 6;
  auto* first = app.add_subcommand("first-move", "First-player win rate and opening uniqueness");
  add_common(first, fm);
  first->add_option("--prefix", prefix, "Opening length to compare, 0 = whole game");

  Common tu;
  int budget = 64, fresh = 200;
  std::string against = "user";
  auto* tune = app.add_subcommand("tune", "Random search with successive halving over heuristic weights");
  add_common(tune, tu);
  tune->add_option("--budget", budget, "Sampled candidates");
  tune->add_option("--against", against, "Opponent heuristic (user or heuristic:FILE)");
  tune->add_option("--fresh", fresh, "Fresh validation matches for the winner");

  Common to;
  std::string roster = "random,first,user";
  int per_pair = 10;
  std::string table;
  auto* tournament = app.add_subcommand("tournament", "Round-robin tournament with BBT ratings");
  add_common(tournament, to);
  tournament->add_option("--agents", roster, "Comma separated agent names");
  tournament->add_option("--games-per-pair", per_pair, "Matches per pair");
  tournament->add_option("--table", table, "Pair table CSV output");

  Common hx;
  std::string sizes = "2-11";
  std::int64_t iterations = 1000;
  auto* hex_sweep = app.add_subcommand("hex-sweep", "MCTS against the shortest-path player on Hex boards");
  add_common(hex_sweep, hx);
  hex_sweep->add_option("--sizes", sizes, "Board sizes, e.g. 2-11 or 3,5,7");
  hex_sweep->add_option("--iterations", iterations, "MCTS iterations per move");

  int env_port_flag = 0;
  bool env_stdio = false;
  auto* env_serve = app.add_subcommand("env-serve", "Serve the RL environment protocol");
  env_serve->add_option("--port", env_port_flag, "TCP port (default: $PORT or stdio)");
  env_serve->add_flag("--stdio", env_stdio, "Use standard input and output");

  int serve_port = 8080;
  std::string log_dir;
  int serve_think = 500;
  auto* serve = app.add_subcommand("serve", "HTTP game server");
  serve->add_option("--port", serve_port, "Port (default: $PORT or 8080)");
  serve->add_option("--log-dir", log_dir, "Finished match logs (default: $LOG_DIR)");
  serve->add_option("--think-ms", serve_think, "Agent think time");

  Common be;
  bool bench_engine = false, bench_mcts = false;
  auto* bench = app.add_subcommand("bench", "Engine and MCTS throughput");
  add_common(bench, be);
  bench->add_flag("--engine", bench_engine, "First-legal-move full games");
  bench->add_flag("--mcts", bench_mcts, "MCTS iterations per second");

  double ss_turns = 37, ss_actions = 74;
  auto* state_space = app.add_subcommand("state-space", "Game tree size estimate");
  state_space->add_option("--turns", ss_turns, "Mean turns per game");
  state_space->add_option("--actions", ss_actions, "Mean actions per turn");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const auto o = options_of(sim);
      auto a = agents::make_agent(sim.agent, o);
      auto b = agents::make_agent(opponent.empty() ? sim.agent : opponent, o);
      std::vector<GameLog> logs;
      double length = 0, first_wins = 0;
      for (int g = 0; g < sim.games; ++g) {
        Agent* seats[2] = {a.get(), b.get()};
        Rng rng = split_rng(sim.seed, static_cast<std::uint64_t>(g));
        const GameState end = play_match(seats, rng);
        length += end.turn();
        first_wins += outcome_values(end)[0];
        logs.push_back(make_log(end, sim.seed));
      }
      std::ostringstream text;
      write_logs(text, logs);
      emit(sim.out, text.str());
      std::fprintf(stderr, "games %d meanLength %.3f firstPlayerWinRate %.4f\n", sim.games, length / sim.games,
                   first_wins / sim.games);
      return 0;
    }
    if (branching->parsed()) {
      const auto p = analysis::branching_profile(factory_of(br.agent, options_of(br)), br.games, br.seed, br.threads);
      emit(br.out, analysis::profile_table(p));
      std::fprintf(stderr, "games %d meanLength %.3f\n", p.games, p.mean_length);
      return 0;
    }
    if (first->parsed()) {
      const auto r = analysis::first_move_advantage(factory_of(fm.agent, options_of(fm)), fm.games, prefix, fm.seed,
                                                    fm.threads);
      std::ostringstream text;
      text << "games,prefix,firstPlayerWinRate,uniquePrefixes\n"
           << r.games << ',' << prefix << ',' << r.first_player_win_rate << ',' << r.unique_prefixes << '\n';
      emit(fm.out, text.str());
      return 0;
    }
    if (tune->parsed()) {
      heuristic::Weights opp = heuristic::kUserWeights;
      if (against != "user") {
        const auto colon = against.find(':');
        opp = heuristic::load_profile(against.substr(colon == std::string::npos ? 0 : colon + 1)).weights;
      }
      heuristic::TunerConfig cfg;
      cfg.budget = budget;
      cfg.games_per_eval = tu.games;
      cfg.threads = tu.threads;
      cfg.seed = tu.seed;
      const auto r = heuristic::tune_weights(opp, cfg);
      const double check = heuristic::win_rate(r.best, opp, fresh, tu.seed + 0x9e37);
      const heuristic::Profile p{"tuned", r.best};
      if (tu.out.empty()) std::cout << heuristic::profile_to_json(p) << '\n';
      else heuristic::save_profile(tu.out, p);
      std::fprintf(stderr, "fitness %.4f freshWinRate %.4f over %d matches\n", r.best_fitness, check, fresh);
      return 0;
    }
    if (tournament->parsed()) {
      const auto o = options_of(to);
      std::vector<rating::Entrant> entrants;
      std::stringstream ss(roster);
      std::string name;
      while (std::getline(ss, name, ',')) entrants.push_back({name, factory_of(name, o)});
      const auto report = rating::run_tournament(entrants, per_pair, {}, to.seed, to.threads);
      emit(to.out, rating::report_json(report) + "\n");
      if (!table.empty()) emit(table, rating::pair_table(report));
      for (std::size_t i = 0; i < report.names.size(); ++i) {
        std::fprintf(stderr, "%-20s mu %8.2f sigma %7.2f maxScore %d\n", report.names[i].c_str(),
                     report.ratings[i].mu, report.ratings[i].sigma, report.scores[i].max);
      }
      std::fprintf(stderr, "matches %zu\n", report.matches.size());
      return 0;
    }
    if (hex_sweep->parsed()) {
      mcts::SearchConfig<hex::HexBoard> cfg;
      cfg.variant = agents::parse_variant(hx.variant);
      cfg.beta = hx.beta;
      cfg.max_iterations = iterations;
      const auto list = parse_sizes(sizes);
      std::ostringstream text;
      text << "size,games,wins,winRate\n";
      for (int n : list) {
        const auto row = hex::hex_match_series(n, hx.games, cfg, hx.seed, hx.threads);
        text << row.size << ',' << row.games << ',' << row.wins << ',' << row.win_rate() << '\n';
        std::fprintf(stderr, "size %d winRate %.3f\n", row.size, row.win_rate());
      }
      emit(hx.out, text.str());
      return 0;
    }
    if (env_serve->parsed()) {
      const int port = env_port_flag ? env_port_flag : env_port(0);
      if (env_stdio || port == 0) {
        rl::serve_stream(std::cin, std::cout);
        return 0;
      }
      rl::TcpEnvServer server(port);
      std::fprintf(stderr, "env-serve listening on 127.0.0.1:%d\n", server.port());
      server.run();
      return 0;
    }
    if (serve->parsed()) {
      server::ServerConfig cfg;
      cfg.agent_options.think_ms = serve_think;
      cfg.log_dir = log_dir;
      if (cfg.log_dir.empty()) {
        if (const char* d = std::getenv("LOG_DIR")) cfg.log_dir = d;
      }
      const int port = serve->count("--port") ? serve_port : env_port(serve_port);
      std::fprintf(stderr, "serving on port %d\n", port);
      return server::serve(port, cfg);
    }
    if (bench->parsed()) {
      if (!bench_engine && !bench_mcts) bench_engine = true;
      if (bench_engine) {
        FirstMoveAgent a, b;
        Agent* seats[2] = {&a, &b};
        Rng rng(be.seed);
        const int games = std::max(be.games, 1000);
        const auto start = std::chrono::steady_clock::now();
        int turns = 0;
        for (int g = 0; g < games; ++g) turns += play_match(seats, rng).turn();
        const double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
        std::printf("engine games %d meanTurns %.1f usPerGame %.2f\n", games, double(turns) / games, us / games);
        if (us / games >= 5000) return 2;
      }
      if (bench_mcts) {
        mcts::TetrisLinkGame game;
        mcts::TetrisConfig cfg;
        cfg.variant = agents::parse_variant(be.variant);
        cfg.think_time = std::chrono::milliseconds(be.think_ms);
        cfg.threads = be.threads;
        Rng rng(be.seed);
        const auto r = mcts::search(game, GameState(), cfg, rng);
        nlohmann::ordered_json j;
        j["variant"] = be.variant;
        j["threads"] = be.threads;
        j["iterations"] = r.iterations;
        j["seconds"] = r.seconds;
        j["iterationsPerSecond"] = r.iterations_per_second();
        j["move"] = r.action;
        j["rootVisits"] = nlohmann::ordered_json::array();
        for (const auto& c : r.root_children) {
          j["rootVisits"].push_back({{"action", c.action}, {"visits", c.visits}, {"mean", c.mean}});
        }
        emit(be.out, j.dump(2) + "\n");
        if (be.out.empty()) std::cout.flush();
        std::fprintf(stderr, "mcts %s threads %d iterations/s %.0f\n", be.variant.c_str(), be.threads,
                     r.iterations_per_second());
      }
      return 0;
    }
    if (state_space->parsed()) {
      const auto e = analysis::state_space_estimate(ss_turns, ss_actions);
      std::printf("actions^turns 10^%.2f (%.3g)\nturns^actions 10^%.2f (%.3g)\n", e.log10_actions_pow_turns,
                  e.actions_pow_turns, e.log10_turns_pow_actions, e.turns_pow_actions);
      return 0;
    }
  } catch (const GameError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
