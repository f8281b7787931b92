#pragma once

// Rule-based players: Greedy, Chitarrella-Saracino (CS) and
// Cicuti-Guardamagna (CG). All of them decide from a PlayerView only.

#include <algorithm>
#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "scopone/engine.hpp"
#include "scopone/guessing.hpp"

namespace scopone {

// Card importance: primiera value x10, +5 for coins, +40 more for the
// settebello. Face cards share a primiera value and are ordered J < Q < K.
constexpr int importance(Card c) {
  int v = primiera_value(c) * 10;
  if (c.rank() >= 8) v += c.rank() - 8;
  if (c.is_coin()) v += 5;
  if (c == kSettebello) v += 40;
  return v;
}

inline int importance(CardSet cards) {
  int sum = 0;
  for (Card c : cards) sum += importance(c);
  return sum;
}

// True when the cards left on the table could all be swept by a card in
// `threats`.
constexpr bool leaves_scopa_threat(CardSet table_after, CardSet threats) {
  if (table_after.empty()) return false;
  int sum = table_after.rank_sum();
  return sum <= kNumRanks && threats.count_rank(sum) > 0;
}

// True when some card in `threats` could capture from `table_after`, i.e.
// some subset of it sums to the rank of a threat card.
inline bool leaves_capture(CardSet table_after, CardSet threats) {
  thread_local std::vector<CardSet> caps;
  for (int r = 1; r <= kNumRanks; ++r) {
    if (threats.count_rank(r) == 0) continue;
    if (table_after.count_rank(r) > 0) return true;
    caps.clear();
    append_captures(r, table_after, caps);
    if (!caps.empty()) return true;
  }
  return false;
}

constexpr bool is_scopa_move(const Move& m, CardSet table, int turn) {
  return m.is_capture() && m.captured == table && turn < kTurnsPerMatch - 1;
}

namespace detail {

struct GreedyKey {
  int primary;
  int secondary;
};

template <class KeyFn>
Move best_by(std::span<const Move> moves, KeyFn key) {
  const Move* best = nullptr;
  GreedyKey best_key{};
  for (const Move& m : moves) {
    GreedyKey k = key(m);
    bool better = !best || k.primary > best_key.primary ||
                  (k.primary == best_key.primary &&
                   (k.secondary > best_key.secondary || (k.secondary == best_key.secondary && m < *best)));
    if (better) {
      best = &m;
      best_key = k;
    }
  }
  return *best;
}

}  // namespace detail

// Greedy choice among `moves` (a non-empty subset of the legal moves):
// capture the most important cards, taking a scopa unless a non-scopa
// capture would win the settebello; otherwise place the least important
// card, preferring moves that leave nothing a card in `threats` could capture.
inline Move choose_greedy(std::span<const Move> moves, CardSet table, CardSet threats, int turn) {
  bool any_capture = false, any_scopa = false;
  for (const Move& m : moves) {
    any_capture |= m.is_capture();
    any_scopa |= is_scopa_move(m, table, turn);
  }
  auto gain = [](const Move& m) { return importance(m.captured); };
  auto safe = [&](const Move& m) {
    CardSet after = table - m.captured;
    if (!m.is_capture()) after.insert(m.played);
    return leaves_capture(after, threats) ? 0 : 1;
  };

  if (any_capture) {
    if (any_scopa) {
      bool scopa_has_settebello = false, other_has_settebello = false;
      for (const Move& m : moves) {
        if (!m.captured.contains(kSettebello)) continue;
        (is_scopa_move(m, table, turn) ? scopa_has_settebello : other_has_settebello) = true;
      }
      bool skip_scopa = other_has_settebello && !scopa_has_settebello;
      return detail::best_by(moves, [&](const Move& m) {
        if (!m.is_capture()) return detail::GreedyKey{-1, 0};
        bool wanted = skip_scopa ? m.captured.contains(kSettebello) : is_scopa_move(m, table, turn);
        return detail::GreedyKey{wanted ? 1 : 0, gain(m) * 2 + safe(m)};
      });
    }
    return detail::best_by(moves, [&](const Move& m) {
      if (!m.is_capture()) return detail::GreedyKey{-1, 0};
      return detail::GreedyKey{gain(m), safe(m)};
    });
  }
  return detail::best_by(moves, [&](const Move& m) { return detail::GreedyKey{safe(m), -importance(m.played)}; });
}

inline Move greedy_choose(const PlayerView& view) {
  std::vector<Move> moves;
  generate_moves(view.hand, view.table, moves);
  if (moves.empty()) throw RulesError(RulesError::Kind::kInvalidState, "no legal moves");
  return choose_greedy(moves, view.table, view.unseen(), view.turn);
}

enum class Rule {
  kOnlyMove,
  kSevensTeammate,
  kMulinello,
  kCapture,
  kDoubleCard,
  kTeammateDouble,
  kDecouple,
  kGreedyFallback,
  kThreeSevens,
  kLastTwoSevens,
};

constexpr std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::kOnlyMove: return "only-move";
    case Rule::kSevensTeammate: return "sevens-teammate";
    case Rule::kMulinello: return "mulinello";
    case Rule::kCapture: return "capture";
    case Rule::kDoubleCard: return "double-card";
    case Rule::kTeammateDouble: return "teammate-double";
    case Rule::kDecouple: return "decouple";
    case Rule::kGreedyFallback: return "greedy-fallback";
    case Rule::kThreeSevens: return "three-sevens";
    case Rule::kLastTwoSevens: return "last-two-sevens";
  }
  return "?";
}

struct RuleDecision {
  Move move;
  Rule rule = Rule::kOnlyMove;
  bool sevens_held_back = false;  // CG: 7 placements filtered out
};

// Cards the opponents of `seat` may hold according to the guess state.
inline CardSet opponent_threats(const GuessState& gs, Seat seat) {
  return gs.candidates[next_seat(seat)] | gs.candidates[next_seat(partner_of(seat))];
}

namespace detail {

inline std::vector<Move> filter(std::span<const Move> moves, auto pred) {
  std::vector<Move> out;
  for (const Move& m : moves)
    if (pred(m)) out.push_back(m);
  return out;
}

}  // namespace detail

// CS rule list evaluated in priority order over `moves`.
inline RuleDecision cs_decide(const PlayerView& v, const GuessState& gs, std::span<const Move> moves) {
  if (moves.empty()) throw RulesError(RulesError::Kind::kInvalidState, "no legal moves");
  if (moves.size() == 1) return {moves.front(), Rule::kOnlyMove};

  const CardSet threats = opponent_threats(gs, v.seat);
  const bool on_hand_team = team_of(v.seat) == hand_team(v.dealer);
  auto greedy = [&](std::span<const Move> subset) { return choose_greedy(subset, v.table, threats, v.turn); };
  auto safe = [&](const Move& m) {
    CardSet after = v.table - m.captured;
    if (!m.is_capture()) after.insert(m.played);
    return !leaves_scopa_threat(after, threats);
  };

  auto captures = detail::filter(moves, [](const Move& m) { return m.is_capture(); });

  // Sevens: the dealer's teammate always takes a 7 from the table, by
  // spariglio when holding at most one 7 of its own.
  CardSet table_sevens = v.table.rank_cards(7);
  if (v.seat == partner_of(v.dealer) && !table_sevens.empty()) {
    auto seven_caps = detail::filter(captures, [&](const Move& m) { return m.captured.intersects(table_sevens); });
    if (!seven_caps.empty()) {
      auto spariglio = detail::filter(seven_caps, [](const Move& m) { return m.captured.size() >= 2; });
      if (v.hand.count_rank(7) <= 1 && !spariglio.empty()) return {greedy(spariglio), Rule::kSevensTeammate};
      return {greedy(seven_caps), Rule::kSevensTeammate};
    }
  }

  if (!captures.empty()) {
    // Mulinello: the hand team continues on a low card rather than a face card.
    bool premium = std::ranges::any_of(captures, [&](const Move& m) {
      return is_scopa_move(m, v.table, v.turn) || m.played.rank() == 7 || m.captured.rank_cards(7).size() > 0;
    });
    if (on_hand_team && !premium) {
      auto singles = detail::filter(captures, [&](const Move& m) { return m.captured.size() == 1 && safe(m); });
      bool low = std::ranges::any_of(singles, [](const Move& m) { return m.played.rank() <= 6; });
      bool face = std::ranges::any_of(singles, [](const Move& m) { return m.played.rank() >= 8; });
      if (low && face) {
        int lowest = kNumRanks;
        for (const Move& m : singles) lowest = std::min(lowest, m.played.rank());
        auto on_lowest = detail::filter(singles, [&](const Move& m) { return m.played.rank() == lowest; });
        return {greedy(on_lowest), Rule::kMulinello};
      }
    }
    return {greedy(captures), Rule::kCapture};
  }

  auto safe_moves = detail::filter(moves, safe);

  // Play a double card.
  auto doubles = detail::filter(safe_moves, [&](const Move& m) { return v.hand.count_rank(m.played.rank()) >= 2; });
  if (!doubles.empty()) return {greedy(doubles), Rule::kDoubleCard};

  // The teammate's double was taken by an opponent and we hold the last
  // copy: play it so the teammate can capture it.
  Seat partner = partner_of(v.seat);
  for (auto it = v.history.rbegin(); it != v.history.rend(); ++it) {
    if (it->seat != partner) continue;
    if (!it->move.is_capture()) {
      Card placed = it->move.played;
      int r = placed.rank();
      bool taken_by_opponent = v.piles[1 - team_of(v.seat)].contains(placed);
      if (taken_by_opponent && v.hand.count_rank(r) == 1 && v.unseen().count_rank(r) == 1) {
        auto reply = detail::filter(safe_moves, [&](const Move& m) { return m.played.rank() == r; });
        if (!reply.empty()) return {greedy(reply), Rule::kTeammateDouble};
      }
    }
    break;
  }

  // Hand team: play the decoupled card of the highest rank.
  if (on_hand_team) {
    CardSet gone = v.piles[0] | v.piles[1];
    auto decoupled = detail::filter(safe_moves, [&](const Move& m) { return gone.count_rank(m.played.rank()) % 2 == 1; });
    if (!decoupled.empty()) {
      int highest = 0;
      for (const Move& m : decoupled) highest = std::max(highest, m.played.rank());
      auto top = detail::filter(decoupled, [&](const Move& m) { return m.played.rank() == highest; });
      return {greedy(top), Rule::kDecouple};
    }
  }

  return {greedy(moves), Rule::kGreedyFallback};
}

inline RuleDecision cs_decide(const PlayerView& v, const GuessState& gs) {
  std::vector<Move> moves;
  generate_moves(v.hand, v.table, moves);
  return cs_decide(v, gs, moves);
}

inline Move cs_choose(const PlayerView& v, const GuessState& gs) { return cs_decide(v, gs).move; }

// CG: CS with additional rules for the sevens.
inline RuleDecision cg_decide(const PlayerView& v, const GuessState& gs) {
  std::vector<Move> moves;
  generate_moves(v.hand, v.table, moves);
  if (moves.empty()) throw RulesError(RulesError::Kind::kInvalidState, "no legal moves");
  if (moves.size() == 1) return {moves.front(), Rule::kOnlyMove};

  const CardSet threats = opponent_threats(gs, v.seat);
  auto greedy = [&](std::span<const Move> subset) { return choose_greedy(subset, v.table, threats, v.turn); };
  CardSet sevens = v.hand.rank_cards(7);
  bool has_settebello = sevens.contains(kSettebello);

  if (sevens.size() == 3 && has_settebello) {
    auto play7 = detail::filter(moves, [](const Move& m) { return m.played.rank() == 7; });
    return {greedy(play7), Rule::kThreeSevens};
  }
  CardSet sevens_out = (v.piles[0] | v.piles[1] | v.table).rank_cards(7);
  if (sevens.size() == 2 && has_settebello && sevens_out.size() == 2) {
    Card target = kSettebello;
    if (team_of(v.seat) == deck_team(v.dealer)) target = (sevens - CardSet{kSettebello}).first();
    auto play = detail::filter(moves, [&](const Move& m) { return m.played == target; });
    return {greedy(play), Rule::kLastTwoSevens};
  }
  if (sevens.size() == 2 && !has_settebello) {
    auto kept = detail::filter(moves, [](const Move& m) { return m.is_capture() || m.played.rank() != 7; });
    if (!kept.empty() && kept.size() < moves.size()) {
      RuleDecision d = cs_decide(v, gs, kept);
      d.sevens_held_back = true;
      return d;
    }
  }
  return cs_decide(v, gs, moves);
}

inline Move cg_choose(const PlayerView& v, const GuessState& gs) { return cg_decide(v, gs).move; }

}  // namespace scopone
