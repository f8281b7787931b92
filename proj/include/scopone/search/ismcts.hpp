#pragma once

// Single-observer ISMCTS. Every iteration samples a determinization of the
// observer's information set and descends one shared tree, restricted to the
// moves legal in that determinization.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scopone/guessing.hpp"
#include "scopone/search/mcts.hpp"

namespace scopone {

enum class DeterminizerKind { kRandom, kCardGuessing };

struct InfoSetNode {
  Move move;
  int parent = -1;
  Seat acting = 0;
  int visits = 0;
  int availability = 0;
  RewardVector reward{};
  std::vector<int> children;
  // Availability of moves legal here that have no child yet.
  std::vector<std::pair<Move, int>> pending;
};

// Draws full states consistent with a view, either uniformly over all
// hidden-hand assignments or restricted by a guess state.
class Determinizer {
 public:
  Determinizer(const PlayerView& view, DeterminizerKind kind, const GuessState* gs = nullptr)
      : view_(view), sampler_(make(view, kind, gs)), base_(state_from_view(view, {})) {}

  template <class Rng>
  MatchState sample(Rng& rng) const {
    MatchState s = base_;
    auto hidden = sampler_.sample(rng);
    for (Seat seat = 0; seat < kNumSeats; ++seat)
      if (seat != view_.seat) s.hands[seat] = hidden[seat];
#ifndef NDEBUG
    if (!(project(s, view_.seat) == view_)) throw std::logic_error("determinization does not match the view");
#endif
    return s;
  }

  const HandSampler& sampler() const { return sampler_; }

 private:
  static HandSampler make(const PlayerView& view, DeterminizerKind kind, const GuessState* gs) {
    if (kind == DeterminizerKind::kCardGuessing) {
      if (gs) return make_sampler(*gs, view.hand_sizes);
      return make_sampler(guess_from_history(view), view.hand_sizes);
    }
    std::array<CardSet, kNumSeats> all;
    all.fill(view.unseen());
    return HandSampler(view.seat, view.unseen(), all, view.hand_sizes);
  }

  const PlayerView& view_;
  HandSampler sampler_;
  MatchState base_;
};

inline MatchState determinize(const PlayerView& view, DeterminizerKind kind, const GuessState* gs, SearchRng& rng) {
  return Determinizer(view, kind, gs).sample(rng);
}

class Ismcts {
 public:
  Ismcts(SearchConfig cfg, DeterminizerKind kind) : cfg_(cfg), kind_(kind), rng_(cfg.seed), det_rng_(cfg.seed ^ 0xD1B54A32D192ED03ULL) {
    cfg_.validate();
  }

  Move choose(const PlayerView& view, const GuessState* gs = nullptr) {
    nodes_.clear();
    std::vector<Move> root_moves;
    generate_moves(view.hand, view.table, root_moves);
    if (root_moves.empty()) throw RulesError(RulesError::Kind::kInvalidState, "no legal moves at the root");
    nodes_.push_back(InfoSetNode{{}, -1, view.seat, 0, 0, {}, {}, {}});
    if (root_moves.size() == 1) return root_moves.front();
    std::optional<GuessState> own_guess;
    if (kind_ == DeterminizerKind::kCardGuessing && !gs) own_guess = guess_from_history(view);
    Determinizer det(view, kind_, gs ? gs : own_guess ? &*own_guess : nullptr);
    for (int it = 0; it < cfg_.iterations; ++it) iterate(det.sample(det_rng_));
    return detail::most_visited(nodes_, nodes_[0]);
  }

  const std::vector<InfoSetNode>& nodes() const { return nodes_; }

 private:
  void iterate(MatchState state) {
    thread_local std::vector<Move> legal;
    thread_local std::vector<int> available;
    thread_local std::vector<Move> untried;
    int node = 0;
    while (!state.is_over()) {
      generate_moves(state.hands[state.current], state.table, legal);
      available.clear();
      untried.clear();
      for (const Move& m : legal) {
        int found = -1;
        for (int c : nodes_[node].children)
          if (nodes_[c].move == m) {
            found = c;
            break;
          }
        if (found >= 0) {
          available.push_back(found);
        } else {
          untried.push_back(m);
        }
      }
      for (int c : available) ++nodes_[c].availability;
      if (!untried.empty()) {
        auto& pending = nodes_[node].pending;
        for (const Move& m : untried) {
          auto it = std::find_if(pending.begin(), pending.end(), [&](const auto& p) { return p.first == m; });
          if (it == pending.end()) pending.emplace_back(m, 1);
          else ++it->second;
        }
        Move m = untried[std::uniform_int_distribution<std::size_t>(0, untried.size() - 1)(rng_)];
        auto it = std::find_if(pending.begin(), pending.end(), [&](const auto& p) { return p.first == m; });
        int availability = it->second;
        *it = pending.back();
        pending.pop_back();
        state.play(m);
        nodes_.push_back(InfoSetNode{m, node, state.current, 0, availability, {}, {}, {}});
        int idx = static_cast<int>(nodes_.size()) - 1;
        nodes_[node].children.push_back(idx);
        node = idx;
        break;
      }
      const InfoSetNode& v = nodes_[node];
      int team = team_of(v.acting);
      int k = detail::argmax_random_tie(
          static_cast<int>(available.size()),
          [&](int i) {
            const InfoSetNode& c = nodes_[available[i]];
            return isuct_value(c.reward[team], c.visits, c.availability, cfg_.uct_c);
          },
          rng_);
      node = available[k];
      state.play(nodes_[node].move);
    }
    simulate(state, cfg_.sim, rng_);
    RewardVector r = reward(state, cfg_.reward);
    for (int n = node; n != -1; n = nodes_[n].parent) {
      ++nodes_[n].visits;
      nodes_[n].reward[0] += r[0];
      nodes_[n].reward[1] += r[1];
    }
  }

  SearchConfig cfg_;
  DeterminizerKind kind_;
  SearchRng rng_;
  SearchRng det_rng_;
  std::vector<InfoSetNode> nodes_;
};

inline Move ismcts_choose(const PlayerView& view, const SearchConfig& cfg, DeterminizerKind kind,
                          const GuessState* gs = nullptr) {
  return Ismcts(cfg, kind).choose(view, gs);
}

}  // namespace scopone
