#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tlink/heuristic/heuristic.hpp"

namespace tlink::heuristic {

struct TunerConfig {
  int budget = 32;          // number of sampled candidates
  int games_per_eval = 4;   // games in the first halving round
  int threads = 1;
  std::uint64_t seed = 1;
};

struct Candidate {
  Weights weights;
  double fitness = 0.0;  // win rate of the last round it was evaluated in
  int games = 0;
};

struct TunerResult {
  Weights best;
  double best_fitness = 0.0;
  std::vector<std::vector<Candidate>> rounds;  // survivors evaluated per round
};

// Win rate (draws count half) of `candidate` against `opponent` over
// `games` matches, alternating who moves first. Match i uses an rng derived
// from (seed, i) so results do not depend on scheduling.
double win_rate(const Weights& candidate, const Weights& opponent, int games, std::uint64_t seed);

// Random search over [0, 15]^4 with successive halving: evaluate all
// candidates on games_per_eval games, keep the better half, double the
// games, repeat until one remains.
TunerResult tune_weights(const Weights& opponent, const TunerConfig& config);

// Runs fn(i) for i in [0, n) on `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

// Weight profile files: {"name":..., "wEdges":..., "wGroup":..., "wScore":..., "wBlock":...}
struct Profile {
  std::string name;
  Weights weights;
};

std::string profile_to_json(const Profile& profile);
Profile profile_from_json(const std::string& text);
Profile load_profile(const std::string& path);
void save_profile(const std::string& path, const Profile& profile);

}  // namespace tlink::heuristic
