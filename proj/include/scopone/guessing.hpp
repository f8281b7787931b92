#pragma once

// Card guessing: per seat, the set of unseen cards that seat may still hold,
// narrowed by negative inferences drawn from the moves it has made.
//
// Inference classes:
//   scopa-negative   a seat that did not sweep a table whose ranks sum to
//                    at most 10 is assumed not to hold a card of that rank.
//   coin-preference  a seat that captured with a non-coin card is assumed
//                    not to hold the coin card of the same rank.
// Both are heuristics. When they make the constraints unsatisfiable the
// coin inferences are dropped first, then the scopa inferences.

#include <array>
#include <cmath>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "scopone/engine.hpp"

namespace scopone {

struct GuessOptions {
  bool scopa_negative = true;
  bool coin_preference = true;
};

struct GuessState {
  Seat observer = 0;
  GuessOptions options;
  CardSet unseen;
  std::array<int, kNumSeats> hand_sizes{};
  std::array<CardSet, kNumSeats> known;  // hard facts: seat holds these cards
  std::array<CardSet, kNumSeats> scopa_removed;
  std::array<CardSet, kNumSeats> coin_removed;
  std::array<CardSet, kNumSeats> candidates;
  std::array<CardSet, kNumSeats> certain;
  int repairs = 0;

  // Debug dump in the canonical card encoding.
  std::string str() const {
    std::string out;
    for (Seat s = 0; s < kNumSeats; ++s) {
      if (s == observer) continue;
      out += "seat " + std::to_string(s) + " (" + std::to_string(hand_sizes[s]) + ") may: " + candidates[s].str() +
             " | must: " + certain[s].str() + "\n";
    }
    return out;
  }
};

namespace detail {

inline std::array<Seat, 3> hidden_seats(Seat observer) {
  return {next_seat(observer), partner_of(observer), next_seat(partner_of(observer))};
}

// Card-side Hall condition: every set S of seats must have room for the
// cards that can only go to S.
inline bool assignment_feasible(Seat observer, CardSet pool, const std::array<CardSet, kNumSeats>& allowed,
                                const std::array<int, kNumSeats>& sizes) {
  auto hidden = hidden_seats(observer);
  int total = 0;
  for (Seat s : hidden) total += sizes[s];
  if (total != pool.size()) return false;
  std::array<int, 8> by_type{};
  for (Card c : pool) {
    int type = 0;
    for (int i = 0; i < 3; ++i)
      if (allowed[hidden[i]].contains(c)) type |= 1 << i;
    ++by_type[type];
  }
  for (int subset = 0; subset < 8; ++subset) {
    int inside = 0, room = 0;
    for (int type = 0; type < 8; ++type)
      if ((type & ~subset) == 0) inside += by_type[type];
    for (int i = 0; i < 3; ++i)
      if (subset & (1 << i)) room += sizes[hidden[i]];
    if (inside > room) return false;
  }
  return true;
}

inline bool derive_candidates(GuessState& gs, bool use_scopa, bool use_coin) {
  auto hidden = hidden_seats(gs.observer);
  for (Seat s = 0; s < kNumSeats; ++s) {
    gs.candidates[s] = CardSet{};
    gs.certain[s] = CardSet{};
  }
  for (Seat s : hidden) {
    CardSet c = gs.unseen;
    if (use_scopa) c -= gs.scopa_removed[s];
    if (use_coin) c -= gs.coin_removed[s];
    for (Seat t : hidden)
      if (t != s) c -= gs.known[t];
    gs.candidates[s] = c;
    gs.certain[s] = gs.known[s] & gs.unseen;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (Card card : gs.unseen) {
      int holders = 0;
      Seat only = -1;
      for (Seat s : hidden)
        if (gs.candidates[s].contains(card)) ++holders, only = s;
      if (holders == 0) return false;
      if (holders == 1 && !gs.certain[only].contains(card)) {
        gs.certain[only].insert(card);
        changed = true;
      }
    }
    for (Seat s : hidden) {
      if (gs.candidates[s].size() < gs.hand_sizes[s] || gs.certain[s].size() > gs.hand_sizes[s]) return false;
      if (gs.candidates[s].size() == gs.hand_sizes[s] && gs.certain[s] != gs.candidates[s]) {
        gs.certain[s] = gs.candidates[s];
        changed = true;
      }
      if (gs.certain[s].size() == gs.hand_sizes[s] && gs.candidates[s] != gs.certain[s]) {
        gs.candidates[s] = gs.certain[s];
        changed = true;
      }
      for (Seat t : hidden) {
        if (t != s && gs.candidates[t].intersects(gs.certain[s])) {
          gs.candidates[t] -= gs.certain[s];
          changed = true;
        }
      }
    }
  }
  return assignment_feasible(gs.observer, gs.unseen, gs.candidates, gs.hand_sizes);
}

}  // namespace detail

// Recomputes candidate and certain sets, dropping heuristic inferences when
// they contradict each other.
inline void refresh(GuessState& gs) {
  bool scopa = gs.options.scopa_negative;
  bool coin = gs.options.coin_preference;
  if (detail::derive_candidates(gs, scopa, coin)) return;
  if (coin) {
    ++gs.repairs;
    gs.coin_removed = {};
    if (detail::derive_candidates(gs, scopa, false)) return;
  }
  if (scopa) {
    ++gs.repairs;
    gs.scopa_removed = {};
    if (detail::derive_candidates(gs, false, false)) return;
  }
  detail::derive_candidates(gs, false, false);
}

inline GuessState init_guess(const PlayerView& view, GuessOptions options = {}) {
  GuessState gs;
  gs.observer = view.seat;
  gs.options = options;
  gs.unseen = view.unseen();
  gs.hand_sizes = view.hand_sizes;
  refresh(gs);
  return gs;
}

inline GuessState observe_move(const GuessState& prior, Seat seat, CardSet table_before, const Move& move) {
  GuessState gs = prior;
  --gs.hand_sizes[seat];
  if (seat != gs.observer) {
    if (!gs.unseen.contains(move.played)) throw std::invalid_argument("observed card was not unseen: " + move.played.str());
    gs.unseen.erase(move.played);
    gs.known[seat].erase(move.played);
    if (gs.hand_sizes[seat] > 0) {
      int sum = table_before.rank_sum();
      if (!table_before.empty() && sum <= kNumRanks && move.captured != table_before)
        gs.scopa_removed[seat] |= gs.unseen.rank_cards(sum);
      if (move.is_capture() && !move.played.is_coin()) {
        Card coin(move.played.rank(), Suit::kCoins);
        if (gs.unseen.contains(coin)) gs.coin_removed[seat].insert(coin);
      }
    }
  }
  refresh(gs);
  return gs;
}

// Records that `seat` is known to hold `cards`.
inline GuessState with_known_cards(const GuessState& prior, Seat seat, CardSet cards) {
  GuessState gs = prior;
  gs.known[seat] |= cards & gs.unseen;
  refresh(gs);
  return gs;
}

// Rebuilds the guess state of `view.seat` by replaying the public history
// from the opening position.
inline GuessState guess_from_history(const PlayerView& view, GuessOptions options = {}) {
  CardSet initial_hand = view.hand;
  for (const auto& e : view.history)
    if (e.seat == view.seat) initial_hand.insert(e.move.played);
  CardSet initial_table = view.history.empty() ? view.table : view.history.front().table_before;
  GuessState gs;
  gs.observer = view.seat;
  gs.options = options;
  gs.unseen = CardSet::full_deck() - initial_hand - initial_table;
  gs.hand_sizes.fill(kHandSize);
  refresh(gs);
  for (const auto& e : view.history) gs = observe_move(gs, e.seat, e.table_before, e.move);
  return gs;
}

inline bool check_invariants(const GuessState& gs, const PlayerView& view, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  CardSet visible = view.hand | view.table | view.piles[0] | view.piles[1];
  for (Seat s = 0; s < kNumSeats; ++s) {
    if (s == gs.observer) continue;
    if (!gs.candidates[s].contains_all(gs.certain[s])) return fail("certain not within candidates");
    if (!gs.unseen.contains_all(gs.candidates[s])) return fail("candidates outside unseen pool");
    if (gs.certain[s].size() > gs.hand_sizes[s]) return fail("too many certain cards");
    if (gs.candidates[s].size() < gs.hand_sizes[s]) return fail("too few candidates");
    if (gs.candidates[s].intersects(visible)) return fail("visible card among candidates");
  }
  return true;
}

// Uniform sampler over assignments of a card pool to the three hidden seats
// that respect per-seat allowed sets and hand sizes. Counts completions with
// a small dynamic program over (group, remaining capacity), so every
// feasible assignment is drawn with equal probability and no draw is rejected.
class HandSampler {
 public:
  HandSampler(Seat observer, CardSet pool, const std::array<CardSet, kNumSeats>& allowed,
              const std::array<int, kNumSeats>& sizes)
      : hidden_(detail::hidden_seats(observer)) {
    for (int i = 0; i < 3; ++i) capacity_[i] = sizes[hidden_[i]];
    std::array<CardSet, 8> by_type{};
    for (Card c : pool) {
      int type = 0;
      for (int i = 0; i < 3; ++i)
        if (allowed[hidden_[i]].contains(c)) type |= 1 << i;
      by_type[type].insert(c);
    }
    for (int type = 0; type < 8; ++type)
      if (!by_type[type].empty()) groups_.push_back({by_type[type], type, by_type[type].size()});
    int total = capacity_[0] + capacity_[1] + capacity_[2];
    if (total != pool.size() || capacity_[0] < 0 || capacity_[1] < 0 || capacity_[2] < 0) return;
    build_table();
    feasible_ = ways(0, capacity_[0], capacity_[1]) > 0;
  }

  bool feasible() const { return feasible_; }
  double count() const { return feasible_ ? ways(0, capacity_[0], capacity_[1]) : 0.0; }

  template <class Rng>
  std::array<CardSet, kNumSeats> sample(Rng& rng) const {
    std::array<CardSet, kNumSeats> out{};
    if (!feasible_) return out;
    int a = capacity_[0], b = capacity_[1];
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const Group& grp = groups_[g];
      int c = remaining_[g] - a - b;
      double total = ways(g, a, b);
      double pick = unit(rng) * total;
      int xa = 0, xb = 0;
      bool chosen = false;
      for_each_split(grp, a, b, c, [&](int sa, int sb, int sc, double w) {
        if (chosen) return;
        w *= ways(g + 1, a - sa, b - sb);
        (void)sc;
        if (w <= 0) return;
        xa = sa, xb = sb;
        if (pick < w) chosen = true;
        pick -= w;
      });
      std::array<Card, kDeckSize> cards{};
      int n = 0;
      for (Card card : grp.cards) cards[n++] = card;
      for (int i = n - 1; i > 0; --i) {
        int j = std::uniform_int_distribution<int>(0, i)(rng);
        std::swap(cards[i], cards[j]);
      }
      for (int i = 0; i < n; ++i) {
        int seat_idx = i < xa ? 0 : (i < xa + xb ? 1 : 2);
        out[hidden_[seat_idx]].insert(cards[i]);
      }
      a -= xa;
      b -= xb;
    }
    return out;
  }

 private:
  struct Group {
    CardSet cards;
    int allowed_mask;
    int size;
  };

  static double factorial(int n) {
    static const std::array<double, kDeckSize + 1> table = [] {
      std::array<double, kDeckSize + 1> t{};
      t[0] = 1;
      for (int i = 1; i <= kDeckSize; ++i) t[i] = t[i - 1] * i;
      return t;
    }();
    return table[n];
  }

  template <class F>
  static void for_each_split(const Group& grp, int a, int b, int c, F&& f) {
    int n = grp.size;
    int max_a = (grp.allowed_mask & 1) ? std::min(n, a) : 0;
    int max_b = (grp.allowed_mask & 2) ? std::min(n, b) : 0;
    for (int xa = 0; xa <= max_a; ++xa) {
      for (int xb = 0; xb <= std::min(max_b, n - xa); ++xb) {
        int xc = n - xa - xb;
        if (xc > c || (xc > 0 && !(grp.allowed_mask & 4))) continue;
        f(xa, xb, xc, factorial(n) / (factorial(xa) * factorial(xb) * factorial(xc)));
      }
    }
  }

  double ways(std::size_t g, int a, int b) const {
    if (a < 0 || b < 0) return 0;
    return table_[g * 100 + a * 10 + b];
  }

  void build_table() {
    std::size_t n = groups_.size();
    remaining_.assign(n + 1, 0);
    for (std::size_t g = n; g-- > 0;) remaining_[g] = remaining_[g + 1] + groups_[g].size;
    table_.assign((n + 1) * 100, 0.0);
    table_[n * 100] = 1.0;
    for (std::size_t g = n; g-- > 0;) {
      for (int a = 0; a <= std::min(9, capacity_[0]); ++a) {
        for (int b = 0; b <= std::min(9, capacity_[1]); ++b) {
          int c = remaining_[g] - a - b;
          if (c < 0) continue;
          double total = 0;
          for_each_split(groups_[g], a, b, c, [&](int xa, int xb, int, double w) { total += w * ways(g + 1, a - xa, b - xb); });
          table_[g * 100 + a * 10 + b] = total;
        }
      }
    }
  }

  std::array<Seat, 3> hidden_;
  std::array<int, 3> capacity_{};
  std::vector<Group> groups_;
  std::vector<int> remaining_;
  std::vector<double> table_;
  bool feasible_ = false;
};

// Sampler honouring the guess state, falling back to hand sizes alone when
// the constraints admit no assignment.
inline HandSampler make_sampler(const GuessState& gs, const std::array<int, kNumSeats>& hand_sizes) {
  HandSampler constrained(gs.observer, gs.unseen, gs.candidates, hand_sizes);
  if (constrained.feasible()) return constrained;
  std::clog << "scopone: guess constraints infeasible, sampling on hand sizes only\n";
  std::array<CardSet, kNumSeats> all;
  all.fill(gs.unseen);
  return HandSampler(gs.observer, gs.unseen, all, hand_sizes);
}

template <class Rng>
std::array<CardSet, kNumSeats> plausible_hands(const GuessState& gs, const std::array<int, kNumSeats>& hand_sizes,
                                               Rng& rng) {
  return make_sampler(gs, hand_sizes).sample(rng);
}

}  // namespace scopone
