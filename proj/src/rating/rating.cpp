#include "tlink/rating/rating.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"
#include "tlink/engine/board.hpp"
#include "tlink/heuristic/tuner.hpp"

namespace tlink::rating {

namespace {

double c_of(const Rating& a, const Rating& b, const BbtConfig& cfg) {
  return std::sqrt(a.sigma * a.sigma + b.sigma * b.sigma + 2.0 * cfg.beta * cfg.beta);
}

const char* result_name(MatchResult r) {
  switch (r) {
    case MatchResult::kAWins: return "a";
    case MatchResult::kBWins: return "b";
    case MatchResult::kDraw: return "draw";
  }
  return "draw";
}

}  // namespace

double win_probability(const Rating& a, const Rating& b, const BbtConfig& cfg) {
  const double c = c_of(a, b, cfg);
  // exp(mu_a/c) / (exp(mu_a/c) + exp(mu_b/c)), written to avoid overflow.
  return 1.0 / (1.0 + std::exp((b.mu - a.mu) / c));
}

std::pair<Rating, Rating> bbt_update(const Rating& a, const Rating& b, MatchResult result, const BbtConfig& cfg) {
  const double c = c_of(a, b, cfg);
  const double pa = win_probability(a, b, cfg);
  const double pb = 1.0 - pa;
  const double sa = result == MatchResult::kAWins ? 1.0 : result == MatchResult::kDraw ? 0.5 : 0.0;
  const double sb = 1.0 - sa;
  const double va = a.sigma * a.sigma, vb = b.sigma * b.sigma;
  Rating na = a, nb = b;
  na.mu += va / c * (sa - pa);
  nb.mu += vb / c * (sb - pb);
  na.sigma = std::sqrt(va * std::max(1.0 - va / (c * c) * pa * pb, cfg.kappa));
  nb.sigma = std::sqrt(vb * std::max(1.0 - vb / (c * c) * pa * pb, cfg.kappa));
  return {na, nb};
}

TournamentReport run_tournament(const std::vector<Entrant>& entrants, int games_per_pair, const BbtConfig& cfg,
                                std::uint64_t seed, int threads) {
  if (entrants.size() < 2) throw GameError(ErrorCode::kInvalidArgument, "a tournament needs two agents");
  const int n = static_cast<int>(entrants.size());
  TournamentReport report;
  for (const auto& e : entrants) report.names.push_back(e.name);
  report.ratings.assign(n, cfg.initial());
  report.scores.resize(n);

  std::vector<MatchRecord> schedule;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      report.pairs.push_back({i, j, 0, 0, 0});
      for (int g = 0; g < games_per_pair; ++g) {
        MatchRecord m;
        m.a = g % 2 == 0 ? i : j;
        m.b = g % 2 == 0 ? j : i;
        schedule.push_back(m);
      }
    }
  }

  heuristic::parallel_for(static_cast<int>(schedule.size()), threads, [&](int k) {
    MatchRecord& m = schedule[k];
    auto first = entrants[m.a].make();
    auto second = entrants[m.b].make();
    Agent* seats[2] = {first.get(), second.get()};
    Rng rng = split_rng(seed, static_cast<std::uint64_t>(k));
    const GameState end = play_match(seats, rng);
    m.score_a = end.position().score(0).total;
    m.score_b = end.position().score(1).total;
    m.result = m.score_a > m.score_b ? MatchResult::kAWins
             : m.score_b > m.score_a ? MatchResult::kBWins
                                     : MatchResult::kDraw;
  });

  for (const MatchRecord& m : schedule) {
    auto [ra, rb] = bbt_update(report.ratings[m.a], report.ratings[m.b], m.result, cfg);
    report.ratings[m.a] = ra;
    report.ratings[m.b] = rb;
    report.scores[m.a].samples.push_back(m.score_a);
    report.scores[m.b].samples.push_back(m.score_b);
    for (auto& p : report.pairs) {
      if ((p.a == m.a && p.b == m.b) || (p.a == m.b && p.b == m.a)) {
        const bool a_is_low = p.a == m.a;
        if (m.result == MatchResult::kDraw) ++p.draws;
        else if ((m.result == MatchResult::kAWins) == a_is_low) ++p.wins;
        else ++p.losses;
      }
    }
  }
  for (auto& s : report.scores) {
    if (s.samples.empty()) continue;
    s.min = *std::min_element(s.samples.begin(), s.samples.end());
    s.max = *std::max_element(s.samples.begin(), s.samples.end());
    double sum = 0;
    for (int v : s.samples) sum += v;
    s.mean = sum / static_cast<double>(s.samples.size());
  }
  report.matches = std::move(schedule);
  return report;
}

std::string report_json(const TournamentReport& report) {
  nlohmann::ordered_json j;
  j["agents"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.names.size(); ++i) {
    const auto& s = report.scores[i];
    std::map<int, int> histogram;
    for (int v : s.samples) ++histogram[v];
    nlohmann::ordered_json dist = nlohmann::ordered_json::object();
    for (auto [score, count] : histogram) dist[std::to_string(score)] = count;
    j["agents"].push_back({{"name", report.names[i]},
                           {"mu", report.ratings[i].mu},
                           {"sigma", report.ratings[i].sigma},
                           {"scoreMin", s.min},
                           {"scoreMean", s.mean},
                           {"scoreMax", s.max},
                           {"scoreDistribution", dist}});
  }
  j["pairs"] = nlohmann::ordered_json::array();
  for (const auto& p : report.pairs) {
    j["pairs"].push_back({{"a", report.names[p.a]},
                          {"b", report.names[p.b]},
                          {"wins", p.wins},
                          {"draws", p.draws},
                          {"losses", p.losses}});
  }
  j["matches"] = nlohmann::ordered_json::array();
  for (const auto& m : report.matches) {
    j["matches"].push_back({{"first", report.names[m.a]},
                            {"second", report.names[m.b]},
                            {"scores", {m.score_a, m.score_b}},
                            {"winner", result_name(m.result)}});
  }
  return j.dump(2);
}

std::string pair_table(const TournamentReport& report) {
  std::ostringstream out;
  out << "agentA,agentB,wins,draws,losses\n";
  for (const auto& p : report.pairs) {
    out << report.names[p.a] << ',' << report.names[p.b] << ',' << p.wins << ',' << p.draws << ',' << p.losses
        << '\n';
  }
  return out.str();
}

}  // namespace tlink::rating
