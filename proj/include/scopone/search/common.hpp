#pragma once

// Pieces shared by MCTS and ISMCTS: configuration, reward functions,
// playout policies and the two selection formulas.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "scopone/engine.hpp"
#include "scopone/rules.hpp"

namespace scopone {

enum class RewardFn { kRawScore, kScoreDifference, kWinLoss, kPositiveWinLoss };
enum class SimKind { kRandom, kCardRandom, kGreedy, kEpsilonGreedy };

struct SimStrategy {
  SimKind kind = SimKind::kEpsilonGreedy;
  double epsilon = 0.3;

  bool operator==(const SimStrategy&) const = default;
};

struct SearchConfig {
  int iterations = 1000;
  double uct_c = 2.0;
  RewardFn reward = RewardFn::kScoreDifference;
  SimStrategy sim;
  std::uint64_t seed = 0;

  void validate() const {
    if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
    if (uct_c < 0) throw std::invalid_argument("uct constant must be non-negative");
    if (sim.epsilon < 0 || sim.epsilon > 1) throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
};

using SearchRng = std::mt19937_64;
using RewardVector = std::array<double, 2>;

inline std::string reward_name(RewardFn r) {
  switch (r) {
    case RewardFn::kRawScore: return "rs";
    case RewardFn::kScoreDifference: return "sd";
    case RewardFn::kWinLoss: return "wl";
    case RewardFn::kPositiveWinLoss: return "pwl";
  }
  return "?";
}

inline RewardFn parse_reward(const std::string& s) {
  if (s == "rs") return RewardFn::kRawScore;
  if (s == "sd") return RewardFn::kScoreDifference;
  if (s == "wl") return RewardFn::kWinLoss;
  if (s == "pwl") return RewardFn::kPositiveWinLoss;
  throw std::invalid_argument("unknown reward function: " + s);
}

inline std::string sim_name(const SimStrategy& s) {
  switch (s.kind) {
    case SimKind::kRandom: return "rs";
    case SimKind::kCardRandom: return "crs";
    case SimKind::kGreedy: return "gs";
    case SimKind::kEpsilonGreedy: {
      std::string eps = std::to_string(s.epsilon);
      eps.erase(eps.find_last_not_of('0') + 1);
      if (eps.back() == '.') eps += '0';
      return "egs(" + eps + ")";
    }
  }
  return "?";
}

// "rs", "crs", "gs" or "egs(<epsilon>)".
inline SimStrategy parse_sim(const std::string& s) {
  if (s == "rs") return {SimKind::kRandom, 0};
  if (s == "crs") return {SimKind::kCardRandom, 0};
  if (s == "gs") return {SimKind::kGreedy, 0};
  if (s.starts_with("egs(") && s.ends_with(")")) {
    std::size_t used = 0;
    std::string body = s.substr(4, s.size() - 5);
    double eps = std::stod(body, &used);
    if (used != body.size()) throw std::invalid_argument("bad epsilon: " + s);
    if (eps < 0 || eps > 1) throw std::invalid_argument("epsilon must lie in [0, 1]");
    return {SimKind::kEpsilonGreedy, eps};
  }
  throw std::invalid_argument("unknown simulation strategy: " + s);
}

inline RewardVector reward_from_scores(int s0, int s1, RewardFn fn) {
  switch (fn) {
    case RewardFn::kRawScore: return {double(s0), double(s1)};
    case RewardFn::kScoreDifference: return {double(s0 - s1), double(s1 - s0)};
    case RewardFn::kWinLoss:
      if (s0 == s1) return {0, 0};
      return s0 > s1 ? RewardVector{1, -1} : RewardVector{-1, 1};
    case RewardFn::kPositiveWinLoss:
      if (s0 == s1) return {0.5, 0.5};
      return s0 > s1 ? RewardVector{1, 0} : RewardVector{0, 1};
  }
  return {0, 0};
}

inline RewardVector reward(const MatchState& final_state, RewardFn fn) {
  auto totals = score_match(final_state).totals();
  return reward_from_scores(totals[0], totals[1], fn);
}

namespace detail {

// Greedy playout move using every card not in the mover's hand as a threat,
// which is what the mover could consider unseen in a determinized state.
inline Move playout_greedy(const MatchState& s, std::span<const Move> moves) {
  CardSet threats = s.all_hands() - s.hands[s.current];
  return choose_greedy(moves, s.table, threats, s.turn);
}

}  // namespace detail

// Plays `state` to the end in place.
inline void simulate(MatchState& state, const SimStrategy& strategy, SearchRng& rng) {
  thread_local std::vector<Move> moves;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (!state.is_over()) {
    generate_moves(state.hands[state.current], state.table, moves);
    auto uniform = [&] { return moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)]; };
    Move m;
    switch (strategy.kind) {
      case SimKind::kRandom:
        m = uniform();
        break;
      case SimKind::kCardRandom: {
        CardSet hand = state.hands[state.current];
        int pick = std::uniform_int_distribution<int>(0, hand.size() - 1)(rng);
        auto it = hand.begin();
        std::advance(it, pick);
        Card card = *it;
        std::size_t first = 0, last = 0;
        while (moves[first].played != card) ++first;
        last = first;
        while (last < moves.size() && moves[last].played == card) ++last;
        m = last - first == 1 ? moves[first]
                              : detail::playout_greedy(state, std::span<const Move>(moves).subspan(first, last - first));
        break;
      }
      case SimKind::kGreedy:
        m = detail::playout_greedy(state, moves);
        break;
      case SimKind::kEpsilonGreedy:
        m = unit(rng) < strategy.epsilon ? uniform() : detail::playout_greedy(state, moves);
        break;
    }
    state.play(m);
  }
}

// UCT: Q/N + c * sqrt(2 ln N_parent / N).
inline double uct_value(double q, int n, int parent_n, double c) {
  return q / n + c * std::sqrt(2.0 * std::log(static_cast<double>(parent_n)) / n);
}

// ISUCT with the availability count: Q/N + c * sqrt(ln N' / N).
inline double isuct_value(double q, int n, int availability, double c) {
  return q / n + c * std::sqrt(std::log(static_cast<double>(availability)) / n);
}

}  // namespace scopone
