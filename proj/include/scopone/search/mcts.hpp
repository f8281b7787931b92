#pragma once

// Cheating MCTS over the complete match state: UCT selection, one expansion
// per iteration, playout, and per-team reward backpropagation. The tree is
// rebuilt for every decision.

#include <algorithm>
#include <limits>
#include <vector>

#include "scopone/search/common.hpp"

namespace scopone {

struct SearchNode {
  Move move;  // incoming move; unset at the root
  int parent = -1;
  Seat acting = 0;  // seat to move in this node
  int visits = 0;
  RewardVector reward{};
  std::vector<int> children;
  std::vector<Move> untried;
};

namespace detail {

// Random index among the maxima of score(i), i in [0, n).
template <class ScoreFn>
int argmax_random_tie(int n, ScoreFn score, SearchRng& rng) {
  double best = -std::numeric_limits<double>::infinity();
  int chosen = -1, ties = 0;
  for (int i = 0; i < n; ++i) {
    double v = score(i);
    if (v > best) {
      best = v;
      chosen = i;
      ties = 1;
    } else if (v == best && std::uniform_int_distribution<int>(0, ties++)(rng) == 0) {
      chosen = i;
    }
  }
  return chosen;
}

// Robust child: most visits, then higher mean reward for the root team,
// then canonical move order.
template <class Node>
Move most_visited(const std::vector<Node>& nodes, const Node& root) {
  int team = team_of(root.acting);
  const Node* best = nullptr;
  for (int idx : root.children) {
    const Node& c = nodes[idx];
    if (!best) {
      best = &c;
      continue;
    }
    double mean_c = c.visits ? c.reward[team] / c.visits : 0;
    double mean_b = best->visits ? best->reward[team] / best->visits : 0;
    if (c.visits > best->visits || (c.visits == best->visits && (mean_c > mean_b || (mean_c == mean_b && c.move < best->move))))
      best = &c;
  }
  return best->move;
}

}  // namespace detail

class Mcts {
 public:
  explicit Mcts(SearchConfig cfg) : cfg_(cfg), rng_(cfg.seed) { cfg_.validate(); }

  Move choose(const MatchState& root) {
    nodes_.clear();
    std::vector<Move> root_moves = legal_moves(root);
    if (root_moves.empty()) throw RulesError(RulesError::Kind::kInvalidState, "no legal moves at the root");
    nodes_.push_back(SearchNode{{}, -1, root.current, 0, {}, {}, root_moves});
    if (root_moves.size() == 1) return root_moves.front();
    for (int it = 0; it < cfg_.iterations; ++it) iterate(root);
    return detail::most_visited(nodes_, nodes_[0]);
  }

  const std::vector<SearchNode>& nodes() const { return nodes_; }

 private:
  void iterate(const MatchState& root) {
    MatchState state = root;
    int node = 0;
    while (!state.is_over() && nodes_[node].untried.empty()) {
      node = select(node);
      state.play(nodes_[node].move);
    }
    if (!state.is_over()) {
      auto& untried = nodes_[node].untried;
      std::size_t pick = std::uniform_int_distribution<std::size_t>(0, untried.size() - 1)(rng_);
      Move m = untried[pick];
      untried[pick] = untried.back();
      untried.pop_back();
      state.play(m);
      SearchNode child{m, node, state.current, 0, {}, {}, {}};
      if (!state.is_over()) generate_moves(state.hands[state.current], state.table, child.untried);
      nodes_.push_back(std::move(child));
      int idx = static_cast<int>(nodes_.size()) - 1;
      nodes_[node].children.push_back(idx);
      node = idx;
    }
    simulate(state, cfg_.sim, rng_);
    RewardVector r = reward(state, cfg_.reward);
    for (int n = node; n != -1; n = nodes_[n].parent) {
      ++nodes_[n].visits;
      nodes_[n].reward[0] += r[0];
      nodes_[n].reward[1] += r[1];
    }
  }

  int select(int node) {
    const SearchNode& v = nodes_[node];
    int team = team_of(v.acting);
    int k = detail::argmax_random_tie(
        static_cast<int>(v.children.size()),
        [&](int i) {
          const SearchNode& c = nodes_[v.children[i]];
          return uct_value(c.reward[team], c.visits, v.visits, cfg_.uct_c);
        },
        rng_);
    return v.children[k];
  }

  SearchConfig cfg_;
  SearchRng rng_;
  std::vector<SearchNode> nodes_;
};

inline Move mcts_choose(const MatchState& state, const SearchConfig& cfg) { return Mcts(cfg).choose(state); }

}  // namespace scopone
