#pragma once

// Rules engine: capture enumeration, legal moves, move application, end of
// match settlement and scoring.

#include <algorithm>
#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scopone/cards.hpp"
#include "scopone/deal.hpp"

namespace scopone {

inline constexpr int kTurnsPerMatch = 36;

class RulesError : public std::runtime_error {
 public:
  enum class Kind { kIllegalMove, kInvalidState, kMatchNotOver };
  RulesError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Move {
  Card played;
  CardSet captured;

  constexpr bool is_capture() const { return !captured.empty(); }
  auto operator<=>(const Move&) const = default;

  // "Jd [3s 5d]" or "As []".
  std::string str() const { return played.str() + " [" + captured.str() + "]"; }
};

struct HistoryEntry {
  CardSet table_before;
  Move move;
  Seat seat = 0;
  bool scopa = false;

  bool operator==(const HistoryEntry&) const = default;
};

namespace detail {

inline void collect_sums(const std::array<Card, kDeckSize>& cards, int count, int start, int remaining, CardSet chosen,
                         int chosen_size, std::vector<CardSet>& out) {
  for (int i = start; i < count; ++i) {
    int r = cards[i].rank();
    if (r > remaining) break;  // cards are sorted by rank
    CardSet next = chosen;
    next.insert(cards[i]);
    if (r == remaining) {
      if (chosen_size + 1 >= 2) out.push_back(next);
    } else {
      collect_sums(cards, count, i + 1, remaining - r, next, chosen_size + 1, out);
    }
  }
}

}  // namespace detail

// Appends the capture sets available to a card of `rank` on `table`.
// A same-rank table card forces a single-card capture; sum captures are
// only considered when no such card exists.
inline void append_captures(int rank, CardSet table, std::vector<CardSet>& out) {
  CardSet same = table.rank_cards(rank);
  if (!same.empty()) {
    for (Card c : same) out.push_back(CardSet{c});
    return;
  }
  std::array<Card, kDeckSize> lower{};
  int n = 0;
  for (Card c : table) {
    if (c.rank() >= rank) break;
    lower[n++] = c;
  }
  detail::collect_sums(lower, n, 0, rank, CardSet{}, 0, out);
}

inline std::vector<CardSet> capture_combinations(Card played, CardSet table) {
  std::vector<CardSet> out;
  append_captures(played.rank(), table, out);
  return out;
}

// Fills `out` with every legal move for a player holding `hand`.
inline void generate_moves(CardSet hand, CardSet table, std::vector<Move>& out) {
  out.clear();
  thread_local std::vector<CardSet> captures;
  int last_rank = 0;
  for (Card c : hand) {
    if (c.rank() != last_rank) {
      captures.clear();
      append_captures(c.rank(), table, captures);
      last_rank = c.rank();
    }
    if (captures.empty()) {
      out.push_back(Move{c, CardSet{}});
    } else {
      for (CardSet cap : captures) out.push_back(Move{c, cap});
    }
  }
}

inline bool is_legal_move(CardSet hand, CardSet table, const Move& move) {
  if (!hand.contains(move.played)) return false;
  std::vector<CardSet> captures;
  append_captures(move.played.rank(), table, captures);
  if (captures.empty()) return move.captured.empty();
  return std::find(captures.begin(), captures.end(), move.captured) != captures.end();
}

// Complete match state. Trivially copyable so searches can clone it cheaply.
struct MatchState {
  std::array<CardSet, kNumSeats> hands;
  CardSet table;
  std::array<CardSet, 2> piles;
  std::array<CardSet, 2> scopa_cards;
  std::array<int, 2> scopa_count{};
  Seat dealer = 3;
  Seat current = 0;
  int last_capturer = -1;
  int turn = 0;
  int history_size = 0;
  std::array<HistoryEntry, kTurnsPerMatch> history_buf{};

  static MatchState from_deal(const DealResult& d) {
    MatchState s;
    s.hands = d.hands;
    s.table = d.table;
    s.dealer = d.dealer;
    s.current = eldest_hand(d.dealer);
    return s;
  }

  bool is_over() const { return turn >= kTurnsPerMatch; }
  std::span<const HistoryEntry> history() const { return {history_buf.data(), static_cast<std::size_t>(history_size)}; }
  CardSet all_hands() const { return hands[0] | hands[1] | hands[2] | hands[3]; }

  // Applies a move without legality checks.
  void play(const Move& move) {
    HistoryEntry& e = history_buf[history_size++];
    e.table_before = table;
    e.move = move;
    e.seat = current;
    e.scopa = false;
    hands[current].erase(move.played);
    if (move.is_capture()) {
      table -= move.captured;
      CardSet& pile = piles[team_of(current)];
      pile |= move.captured;
      pile.insert(move.played);
      last_capturer = current;
      if (table.empty() && turn < kTurnsPerMatch - 1) {
        e.scopa = true;
        ++scopa_count[team_of(current)];
        scopa_cards[team_of(current)].insert(move.played);
      }
    } else {
      table.insert(move.played);
    }
    ++turn;
    current = next_seat(current);
    if (turn == kTurnsPerMatch && last_capturer >= 0) {
      piles[team_of(last_capturer)] |= table;
      table = CardSet{};
    }
  }

  bool operator==(const MatchState& o) const {
    return hands == o.hands && table == o.table && piles == o.piles && scopa_cards == o.scopa_cards &&
           scopa_count == o.scopa_count && dealer == o.dealer && current == o.current &&
           last_capturer == o.last_capturer && turn == o.turn &&
           std::ranges::equal(history(), o.history());
  }
};

inline std::vector<Move> legal_moves(const MatchState& state) {
  if (state.is_over()) return {};
  if (state.hands[state.current].empty())
    throw RulesError(RulesError::Kind::kInvalidState, "current seat has no cards before the end of the match");
  std::vector<Move> out;
  generate_moves(state.hands[state.current], state.table, out);
  return out;
}

inline MatchState apply_move(const MatchState& state, const Move& move) {
  if (state.is_over() || !is_legal_move(state.hands[state.current], state.table, move))
    throw RulesError(RulesError::Kind::kIllegalMove, "illegal move " + move.str());
  MatchState next = state;
  next.play(move);
  return next;
}

struct TeamScore {
  int scopa = 0;
  int cards = 0;
  int coins = 0;
  bool settebello = false;
  int primiera = 0;
  bool all_suits = false;
  int cards_point = 0;
  int coins_point = 0;
  int settebello_point = 0;
  int primiera_point = 0;
  int total = 0;

  bool operator==(const TeamScore&) const = default;
};

struct MatchScore {
  std::array<TeamScore, 2> team;

  std::array<int, 2> totals() const { return {team[0].total, team[1].total}; }
  // Winning team, or -1 on a tie.
  int winner() const {
    if (team[0].total == team[1].total) return -1;
    return team[0].total > team[1].total ? 0 : 1;
  }
  bool operator==(const MatchScore&) const = default;
};

// Scores two team piles. A team missing a suit concedes the primiera
// point; when both miss a suit nobody scores it.
inline MatchScore score_piles(const std::array<CardSet, 2>& piles, const std::array<int, 2>& scope) {
  MatchScore out;
  for (int t = 0; t < 2; ++t) {
    TeamScore& ts = out.team[t];
    ts.scopa = scope[t];
    ts.cards = piles[t].size();
    ts.coins = (piles[t] & CardSet::of_suit(Suit::kCoins)).size();
    ts.settebello = piles[t].contains(kSettebello);
    auto best = best_primiera_per_suit(piles[t]);
    ts.all_suits = std::ranges::all_of(best, [](int v) { return v > 0; });
    for (int v : best) ts.primiera += v;
  }
  auto majority = [&](int a, int b, int TeamScore::*field) {
    if (a > b) out.team[0].*field = 1;
    if (b > a) out.team[1].*field = 1;
  };
  majority(out.team[0].cards, out.team[1].cards, &TeamScore::cards_point);
  majority(out.team[0].coins, out.team[1].coins, &TeamScore::coins_point);
  for (int t = 0; t < 2; ++t) out.team[t].settebello_point = out.team[t].settebello ? 1 : 0;
  bool full0 = out.team[0].all_suits, full1 = out.team[1].all_suits;
  if (full0 && !full1) {
    out.team[0].primiera_point = 1;
  } else if (full1 && !full0) {
    out.team[1].primiera_point = 1;
  } else if (full0 && full1) {
    majority(out.team[0].primiera, out.team[1].primiera, &TeamScore::primiera_point);
  }
  for (auto& ts : out.team)
    ts.total = ts.scopa + ts.cards_point + ts.coins_point + ts.settebello_point + ts.primiera_point;
  return out;
}

inline MatchScore score_match(const MatchState& state) {
  if (!state.is_over()) throw RulesError(RulesError::Kind::kMatchNotOver, "match is not over");
  return score_piles(state.piles, state.scopa_count);
}

// What one seat can observe. Captures are public, so piles are included.
struct PlayerView {
  Seat seat = 0;
  Seat dealer = 3;
  Seat current = 0;
  int turn = 0;
  int last_capturer = -1;
  CardSet hand;
  CardSet table;
  std::array<CardSet, 2> piles;
  std::array<CardSet, 2> scopa_cards;
  std::array<int, 2> scopa_count{};
  std::array<int, kNumSeats> hand_sizes{};
  std::vector<HistoryEntry> history;

  CardSet unseen() const { return CardSet::full_deck() - hand - table - piles[0] - piles[1]; }
  bool operator==(const PlayerView&) const = default;
};

inline PlayerView project(const MatchState& state, Seat seat) {
  PlayerView v;
  v.seat = seat;
  v.dealer = state.dealer;
  v.current = state.current;
  v.turn = state.turn;
  v.last_capturer = state.last_capturer;
  v.hand = state.hands[seat];
  v.table = state.table;
  v.piles = state.piles;
  v.scopa_cards = state.scopa_cards;
  v.scopa_count = state.scopa_count;
  for (int s = 0; s < kNumSeats; ++s) v.hand_sizes[s] = state.hands[s].size();
  auto h = state.history();
  v.history.assign(h.begin(), h.end());
  return v;
}

// Rebuilds a full state from a view plus the hidden hands.
inline MatchState state_from_view(const PlayerView& v, const std::array<CardSet, kNumSeats>& hidden) {
  MatchState s;
  s.hands = hidden;
  s.hands[v.seat] = v.hand;
  s.table = v.table;
  s.piles = v.piles;
  s.scopa_cards = v.scopa_cards;
  s.scopa_count = v.scopa_count;
  s.dealer = v.dealer;
  s.current = v.current;
  s.last_capturer = v.last_capturer;
  s.turn = v.turn;
  s.history_size = static_cast<int>(v.history.size());
  std::copy(v.history.begin(), v.history.end(), s.history_buf.begin());
  return s;
}

}  // namespace scopone
