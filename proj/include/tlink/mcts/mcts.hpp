#pragma once

// Game-generic Monte Carlo tree search: UCT, RAVE and PoolRAVE selection,
// random or custom playout policies, seeding from recorded games, and tree
// parallelism with virtual loss.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace tlink::mcts {

using Rng = std::mt19937_64;

template <class G>
concept Game = requires(const G g, typename G::State s, const typename G::State cs,
                        std::vector<int>& actions, int a) {
  { g.action_count() } -> std::convertible_to<int>;
  g.legal_actions(cs, actions);  // ascending action order
  g.apply(s, a);
  { g.terminal(cs) } -> std::convertible_to<bool>;
  { g.to_move(cs) } -> std::convertible_to<int>;
  { g.player_count(cs) } -> std::convertible_to<int>;
  { g.outcome(cs, a) } -> std::convertible_to<double>;  // in [0, 1]
};
// A game may also provide `int random_action(const State&, Rng&)`, a faster
// uniform draw over legal actions used by random playouts.

enum class Variant { kUct, kRave, kPoolRave };

template <class State>
using PlayoutPolicy = std::function<int(const State&, Rng&)>;

template <class State>
struct SearchConfig {
  Variant variant = Variant::kUct;
  double cp = std::sqrt(2.0);
  int beta = 1000;          // RAVE visits at which the AMAF share reaches zero
  int pool_size = 10;       // PoolRAVE
  double pool_prob = 0.5;   // PoolRAVE
  PlayoutPolicy<State> playout;  // empty: uniform random
  std::chrono::milliseconds think_time{0};
  std::int64_t max_iterations = 0;  // 0: only the deadline applies
  int threads = 1;
  int simulations_per_step = 1;
};

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node;

struct Edge {
  int action = -1;
  std::atomic<Node*> child{nullptr};
  std::atomic<std::int64_t> rave_visits{0};
  std::atomic<double> rave_value{0.0};
};

struct Node {
  Node(int mover_, int to_move_, bool terminal_, std::span<const int> actions)
      : mover(mover_),
        to_move(to_move_),
        terminal(terminal_),
        edge_count(static_cast<int>(actions.size())),
        edges(std::make_unique<Edge[]>(actions.size())) {
    for (int i = 0; i < edge_count; ++i) edges[i].action = actions[i];
  }
  ~Node() {
    for (int i = 0; i < edge_count; ++i) delete edges[i].child.load(std::memory_order_relaxed);
  }
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  // Index of the edge for `action`, or -1.
  int find_edge(int action) const {
    int lo = 0, hi = edge_count;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (edges[mid].action < action) lo = mid + 1;
      else hi = mid;
    }
    return lo < edge_count && edges[lo].action == action ? lo : -1;
  }

  const int mover;    // player whose move led here; -1 at the root
  const int to_move;  // player choosing among the edges
  const bool terminal;
  std::atomic<std::int64_t> visits{0};
  std::atomic<std::int64_t> evaluations{0};  // playouts started or terminal hits here
  std::atomic<int> virtual_loss{0};
  std::atomic<double> value_sum{0.0};  // from the mover's point of view
  const int edge_count;
  std::unique_ptr<Edge[]> edges;
  std::mutex expand_mutex;
};

struct ChildStats {
  int action = -1;
  std::int64_t visits = 0;
  double mean = 0.0;
  std::int64_t rave_visits = 0;
  double rave_mean = 0.0;
};

struct SearchResult {
  int action = -1;
  std::int64_t iterations = 0;
  double seconds = 0.0;
  double iterations_per_second() const { return seconds > 0 ? iterations / seconds : 0.0; }
  std::vector<ChildStats> root_children;
};

struct PlayoutStats {
  std::int64_t decisions = 0;        // playout moves taken
  std::int64_t pool_available = 0;   // of those, moves where some pool action was legal
  std::int64_t substitutions = 0;    // pool action actually played
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double mean_or(const std::atomic<double>& sum, std::int64_t n, double fallback) {
  return n > 0 ? sum.load(std::memory_order_relaxed) / static_cast<double>(n) : fallback;
}

// mean + cp * sqrt(ln N / n); unvisited children are forced first.
inline double uct_score(double child_value_sum, std::int64_t child_visits, std::int64_t parent_visits,
                        double cp) {
  if (child_visits <= 0) return kInf;
  const double mean = child_value_sum / static_cast<double>(child_visits);
  if (parent_visits <= 1) return mean;
  return mean + cp * std::sqrt(std::log(static_cast<double>(parent_visits)) / child_visits);
}

// AMAF share alpha = max(0, (beta - rave_visits) / beta).
inline double rave_alpha(std::int64_t rave_visits, int beta) {
  if (beta <= 0) return 0.0;
  return std::max(0.0, static_cast<double>(beta - rave_visits) / beta);
}

// (1 - alpha) * Q_uct + alpha * Q_rave + alpha * cp * sqrt(ln N / n). The
// exploration term shrinks to zero as the AMAF visits approach beta. With no
// direct visits Q_uct falls back to Q_rave; while alpha > 0 such a child is
// still forced (infinite exploration term).
inline double rave_score(double child_value_sum, std::int64_t child_visits, double rave_value_sum,
                         std::int64_t rave_visits, std::int64_t parent_visits, double cp, int beta) {
  const double alpha = rave_alpha(rave_visits, beta);
  if (rave_visits <= 0 && child_visits <= 0) return kInf;
  const double q_rave = rave_visits > 0 ? rave_value_sum / static_cast<double>(rave_visits) : 0.0;
  if (child_visits <= 0) return alpha > 0.0 ? kInf : q_rave;
  const double q_uct = child_value_sum / static_cast<double>(child_visits);
  const double q_mix = rave_visits > 0 ? (1.0 - alpha) * q_uct + alpha * q_rave : q_uct;
  if (parent_visits <= 1 || alpha == 0.0) return q_mix;
  return q_mix + alpha * cp * std::sqrt(std::log(static_cast<double>(parent_visits)) / child_visits);
}

template <Game G>
class Tree {
 public:
  using State = typename G::State;

  Tree(const G& game, State root_state) : game_(game), root_state_(std::move(root_state)) {
    std::vector<int> actions;
    if (!game_.terminal(root_state_)) game_.legal_actions(root_state_, actions);
    root_ = std::make_unique<Node>(-1, game_.to_move(root_state_), game_.terminal(root_state_), actions);
  }

  const G& game() const { return game_; }
  const State& root_state() const { return root_state_; }
  Node& root() { return *root_; }
  const Node& root() const { return *root_; }

  // Child behind edge `e` of `node`, created from `next` if missing.
  Node* child_for(Node& node, int e, const State& next, int mover) {
    Node* child = node.edges[e].child.load(std::memory_order_acquire);
    if (child) return child;
    std::lock_guard<std::mutex> lock(node.expand_mutex);
    child = node.edges[e].child.load(std::memory_order_relaxed);
    if (child) return child;
    thread_local std::vector<int> actions;
    actions.clear();
    const bool terminal = game_.terminal(next);
    if (!terminal) game_.legal_actions(next, actions);
    child = new Node(mover, game_.to_move(next), terminal, actions);
    node.edges[e].child.store(child, std::memory_order_release);
    node_count_.fetch_add(1, std::memory_order_relaxed);
    return child;
  }

  std::int64_t node_count() const { return node_count_.load() + 1; }

 private:
  const G& game_;
  State root_state_;
  std::unique_ptr<Node> root_;
  std::atomic<std::int64_t> node_count_{0};
};

template <Game G>
class Searcher {
 public:
  using State = typename G::State;
  using Config = SearchConfig<State>;
  using Played = std::pair<int, int>;  // (player, action)

  Searcher(Tree<G>& tree, const Config& config) : tree_(tree), game_(tree.game()), config_(config) {}

  // Updates visits and values along `path`; for RAVE variants also the AMAF
  // statistics of every path node for each later action of its player to
  // move (first occurrence only). Clears the virtual loss this walk added.
  void backpropagate(std::span<Node* const> path, std::span<const Played> played,
                     std::span<const double> outcome, bool clear_virtual_loss) {
    const bool rave = config_.variant != Variant::kUct;
    for (std::size_t d = 0; d < path.size(); ++d) {
      Node* node = path[d];
      node->visits.fetch_add(1, std::memory_order_relaxed);
      if (node->mover >= 0) node->value_sum.fetch_add(outcome[node->mover], std::memory_order_relaxed);
      if (clear_virtual_loss && d > 0) node->virtual_loss.fetch_sub(1, std::memory_order_relaxed);
      if (!rave || node->edge_count == 0) continue;
      ++generation_;
      if (seen_.size() < static_cast<std::size_t>(game_.action_count())) seen_.assign(game_.action_count(), 0);
      for (std::size_t k = d; k < played.size(); ++k) {
        const auto [player, action] = played[k];
        if (player != node->to_move || seen_[action] == generation_) continue;
        seen_[action] = generation_;
        const int e = node->find_edge(action);
        if (e < 0) continue;
        node->edges[e].rave_visits.fetch_add(1, std::memory_order_relaxed);
        node->edges[e].rave_value.fetch_add(outcome[player], std::memory_order_relaxed);
      }
    }
    path.back()->evaluations.fetch_add(1, std::memory_order_relaxed);
  }

  // Plays to the end with the configured policy; records every action.
  void playout(State& state, const Node* pool_node, Rng& rng, std::vector<Played>& played,
               std::vector<double>& outcome) {
    build_pool(pool_node);
    while (!game_.terminal(state)) {
      const int player = game_.to_move(state);
      int action = -1;
      if (config_.playout) {
        action = config_.playout(state, rng);
      } else if constexpr (requires { game_.random_action(state, rng); }) {
        if (pool_.empty()) {
          action = game_.random_action(state, rng);
        } else {
          game_.legal_actions(state, legal_);
          action = pick_random(rng);
        }
      } else {
        game_.legal_actions(state, legal_);
        action = pick_random(rng);
      }
      ++stats_.decisions;
      played.emplace_back(player, action);
      game_.apply(state, action);
    }
    fill_outcome(state, outcome);
  }

  // One select/expand/playout/backpropagate cycle from the root.
  void iterate(Rng& rng) {
    State state = tree_.root_state();
    path_.clear();
    played_.clear();
    Node* node = &tree_.root();
    path_.push_back(node);
    Node* pool_node = nullptr;
    while (!node->terminal) {
      const int e = select(*node);
      const int action = node->edges[e].action;
      const int player = node->to_move;
      played_.emplace_back(player, action);
      game_.apply(state, action);
      const bool existed = node->edges[e].child.load(std::memory_order_acquire) != nullptr;
      Node* child = tree_.child_for(*node, e, state, player);
      child->virtual_loss.fetch_add(1, std::memory_order_relaxed);
      pool_node = node;
      path_.push_back(child);
      node = child;
      if (!existed) break;
    }
    if (node->terminal) {
      fill_outcome(state, outcome_);
      backpropagate(path_, played_, outcome_, true);
      return;
    }
    const int sims = std::max(1, config_.simulations_per_step);
    const std::size_t tree_actions = played_.size();
    for (int s = 0; s < sims; ++s) {
      State sim = s + 1 < sims ? state : std::move(state);
      played_.resize(tree_actions);
      playout(sim, config_.variant == Variant::kPoolRave ? pool_node : nullptr, rng, played_, outcome_);
      // Virtual loss is taken once per walk, so release it with the last run.
      backpropagate(path_, played_, outcome_, s + 1 == sims);
    }
  }

  // Scores the edges of `node` under the configured variant; highest wins,
  // ties go to the lowest action.
  int select(const Node& node) const {
    const std::int64_t parent_visits =
        node.visits.load(std::memory_order_relaxed) + node.virtual_loss.load(std::memory_order_relaxed);
    int best = 0;
    double best_score = -kInf;
    for (int i = 0; i < node.edge_count; ++i) {
      const Edge& edge = node.edges[i];
      const Node* child = edge.child.load(std::memory_order_acquire);
      std::int64_t n = 0;
      double w = 0.0;
      if (child) {
        n = child->visits.load(std::memory_order_relaxed) + child->virtual_loss.load(std::memory_order_relaxed);
        w = child->value_sum.load(std::memory_order_relaxed);
      }
      double score;
      if (config_.variant == Variant::kUct) {
        score = uct_score(w, n, parent_visits, config_.cp);
      } else {
        score = rave_score(w, n, edge.rave_value.load(std::memory_order_relaxed),
                           edge.rave_visits.load(std::memory_order_relaxed), parent_visits, config_.cp,
                           config_.beta);
      }
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    return best;
  }

  const PlayoutStats& stats() const { return stats_; }

 private:
  void fill_outcome(const State& state, std::vector<double>& outcome) const {
    const int n = game_.player_count(state);
    outcome.resize(n);
    for (int p = 0; p < n; ++p) outcome[p] = game_.outcome(state, p);
  }

  void build_pool(const Node* node) {
    pool_.clear();
    if (!node || config_.pool_size <= 0) return;
    std::vector<std::pair<double, int>> ranked;
    for (int i = 0; i < node->edge_count; ++i) {
      const auto rv = node->edges[i].rave_visits.load(std::memory_order_relaxed);
      if (rv <= 0) continue;
      ranked.emplace_back(node->edges[i].rave_value.load(std::memory_order_relaxed) / rv, node->edges[i].action);
    }
    const std::size_t k = std::min<std::size_t>(ranked.size(), config_.pool_size);
    std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    for (std::size_t i = 0; i < k; ++i) pool_.push_back(ranked[i].second);
  }

  int pick_random(Rng& rng) {
    if (legal_.empty()) throw SearchError("non-terminal state without legal actions");
    if (!pool_.empty()) {
      pool_legal_.clear();
      for (int a : pool_) {
        if (std::binary_search(legal_.begin(), legal_.end(), a)) pool_legal_.push_back(a);
      }
      if (!pool_legal_.empty()) {
        ++stats_.pool_available;
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < config_.pool_prob) {
          ++stats_.substitutions;
          std::uniform_int_distribution<std::size_t> pick(0, pool_legal_.size() - 1);
          return pool_legal_[pick(rng)];
        }
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, legal_.size() - 1);
    return legal_[pick(rng)];
  }

  Tree<G>& tree_;
  const G& game_;
  const Config& config_;
  std::vector<Node*> path_;
  std::vector<Played> played_;
  std::vector<double> outcome_;
  std::vector<int> legal_;
  std::vector<int> pool_;
  std::vector<int> pool_legal_;
  std::vector<std::uint32_t> seen_;
  std::uint32_t generation_ = 0;
  PlayoutStats stats_;
};

// Seeds the tree with complete recorded games. Each sequence starts at the
// tree's root state; the realised path gets nodes, visits, values and AMAF
// statistics as if it had been one simulation. Throws SearchError when a
// sequence contains an illegal action.
template <Game G>
void prefill(Tree<G>& tree, const SearchConfig<typename G::State>& config,
             std::span<const std::vector<int>> sequences) {
  SearchConfig<typename G::State> rave_config = config;
  if (rave_config.variant == Variant::kUct) rave_config.variant = Variant::kRave;
  Searcher<G> searcher(tree, rave_config);
  const G& game = tree.game();
  std::vector<int> legal;
  std::vector<Node*> path;
  std::vector<std::pair<int, int>> played;
  std::vector<double> outcome;
  for (const auto& seq : sequences) {
    auto state = tree.root_state();
    Node* node = &tree.root();
    path.assign(1, node);
    played.clear();
    for (int action : seq) {
      if (game.terminal(state)) throw SearchError("recorded game continues past the end");
      const int e = node->find_edge(action);
      if (e < 0) throw SearchError("recorded action is illegal");
      const int player = node->to_move;
      played.emplace_back(player, action);
      game.apply(state, action);
      node = tree.child_for(*node, e, state, player);
      path.push_back(node);
    }
    if (!game.terminal(state)) throw SearchError("recorded game is unfinished");
    const int n = game.player_count(state);
    outcome.resize(n);
    for (int p = 0; p < n; ++p) outcome[p] = game.outcome(state, p);
    searcher.backpropagate(path, played, outcome, false);
  }
}

template <Game G>
std::vector<ChildStats> root_child_stats(const Tree<G>& tree) {
  std::vector<ChildStats> out;
  const Node& root = tree.root();
  for (int i = 0; i < root.edge_count; ++i) {
    const Edge& e = root.edges[i];
    const Node* c = e.child.load();
    ChildStats s;
    s.action = e.action;
    s.visits = c ? c->visits.load() : 0;
    s.mean = c ? mean_or(c->value_sum, s.visits, 0.0) : 0.0;
    s.rave_visits = e.rave_visits.load();
    s.rave_mean = mean_or(e.rave_value, s.rave_visits, 0.0);
    out.push_back(s);
  }
  return out;
}

// Most visited root child, lowest action on ties.
inline int most_visited(std::span<const ChildStats> children) {
  int best = -1;
  std::int64_t best_visits = -1;
  for (const auto& c : children) {
    if (c.visits > best_visits) {
      best_visits = c.visits;
      best = c.action;
    }
  }
  return best;
}

// Runs the search on an existing (possibly pre-filled) tree. Workers share
// the tree; worker i draws from an rng seeded by (seed, i), worker 0 runs on
// the calling thread.
template <Game G>
SearchResult run_search(Tree<G>& tree, const SearchConfig<typename G::State>& config, Rng& rng,
                        PlayoutStats* stats_out = nullptr) {
  Node& root = tree.root();
  if (root.terminal || root.edge_count == 0) throw SearchError("no legal moves");
  SearchResult result;
  const auto start = std::chrono::steady_clock::now();
  if (root.edge_count == 1) {
    result.action = root.edges[0].action;
    result.root_children = root_child_stats(tree);
    return result;
  }
  if (config.max_iterations <= 0 && config.think_time.count() <= 0) {
    throw SearchError("search needs an iteration budget or a think time");
  }
  const auto deadline = start + config.think_time;
  const bool timed = config.think_time.count() > 0;
  const int threads = std::max(1, config.threads);
  const std::uint64_t seed = rng();
  std::atomic<std::int64_t> started{0};
  std::vector<PlayoutStats> per_thread(threads);

  auto worker = [&](int index) {
    Rng local(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index));
    Searcher<G> searcher(tree, config);
    for (;;) {
      if (config.max_iterations > 0 && started.fetch_add(1, std::memory_order_relaxed) >= config.max_iterations) break;
      if (timed && std::chrono::steady_clock::now() >= deadline) break;
      searcher.iterate(local);
    }
    per_thread[index] = searcher.stats();
  };

  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& th : pool) th.join();

  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.root_children = root_child_stats(tree);
  std::int64_t total = 0;
  for (const auto& c : result.root_children) total += c.visits;
  result.iterations = total;
  result.action = most_visited(result.root_children);
  if (stats_out) {
    *stats_out = {};
    for (const auto& s : per_thread) {
      stats_out->decisions += s.decisions;
      stats_out->pool_available += s.pool_available;
      stats_out->substitutions += s.substitutions;
    }
  }
  return result;
}

template <Game G>
SearchResult search(const G& game, const typename G::State& state, const SearchConfig<typename G::State>& config,
                    Rng& rng) {
  Tree<G> tree(game, state);
  return run_search(tree, config, rng);
}

template <Game G>
SearchResult parallel_search(const G& game, const typename G::State& state,
                             const SearchConfig<typename G::State>& config, Rng& rng) {
  return search(game, state, config, rng);
}

}  // namespace tlink::mcts
