#include "tlink/heuristic/tuner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace tlink::heuristic {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double win_rate(const Weights& candidate, const Weights& opponent, int games, std::uint64_t seed) {
  if (games <= 0) return 0.0;
  HeuristicAgent me("candidate", candidate);
  HeuristicAgent them("opponent", opponent);
  double points = 0.0;
  for (int g = 0; g < games; ++g) {
    Rng rng = split_rng(seed, static_cast<std::uint64_t>(g));
    const bool me_first = g % 2 == 0;
    Agent* seats[2] = {me_first ? static_cast<Agent*>(&me) : &them,
                       me_first ? static_cast<Agent*>(&them) : &me};
    const GameState end = play_match(seats, rng);
    points += outcome_values(end)[me_first ? 0 : 1];
  }
  return points / games;
}

TunerResult tune_weights(const Weights& opponent, const TunerConfig& config) {
  TunerResult result;
  const int n = std::max(1, config.budget);
  Rng sampler = split_rng(config.seed, 0);
  std::vector<Candidate> pool(n);
  for (auto& c : pool) c.weights = random_weights(sampler);

  int games = std::max(1, config.games_per_eval);
  for (int round = 0;; ++round) {
    const std::uint64_t round_seed = config.seed * 1000003ULL + static_cast<std::uint64_t>(round) + 1;
    parallel_for(static_cast<int>(pool.size()), config.threads, [&](int i) {
      // Every candidate in a round faces the same game seeds.
      pool[i].fitness = win_rate(pool[i].weights, opponent, games, round_seed);
      pool[i].games = games;
    });
    // Stable so equal fitness keeps sampling order.
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Candidate& a, const Candidate& b) { return a.fitness > b.fitness; });
    result.rounds.push_back(pool);
    if (pool.size() == 1) break;
    pool.resize((pool.size() + 1) / 2);
    games *= 2;
  }
  result.best = pool.front().weights;
  result.best_fitness = pool.front().fitness;
  return result;
}

std::string profile_to_json(const Profile& profile) {
  nlohmann::ordered_json j;
  j["name"] = profile.name;
  j["wEdges"] = profile.weights.edges;
  j["wGroup"] = profile.weights.group;
  j["wScore"] = profile.weights.score;
  j["wBlock"] = profile.weights.block;
  return j.dump(2);
}

Profile profile_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Profile p;
    p.name = j.value("name", std::string("custom"));
    p.weights.edges = j.at("wEdges").get<double>();
    p.weights.group = j.at("wGroup").get<double>();
    p.weights.score = j.at("wScore").get<double>();
    p.weights.block = j.at("wBlock").get<double>();
    if (!p.weights.valid()) throw GameError(ErrorCode::kInvalidArgument, "weights must lie in [0, 15]");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw GameError(ErrorCode::kInvalidArgument, std::string("bad weight profile: ") + e.what());
  }
}

Profile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GameError(ErrorCode::kInvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return profile_from_json(ss.str());
}

void save_profile(const std::string& path, const Profile& profile) {
  std::ofstream out(path);
  if (!out) throw GameError(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << profile_to_json(profile) << '\n';
}

}  // namespace tlink::heuristic
