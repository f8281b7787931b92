#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "scopone/cards.hpp"

namespace scopone {

using Seat = int;
inline constexpr int kNumSeats = 4;
inline constexpr int kHandSize = 9;
inline constexpr int kInitialTableSize = 4;

constexpr Seat next_seat(Seat s) { return (s + 1) % kNumSeats; }
constexpr int team_of(Seat s) { return s % 2; }
constexpr Seat partner_of(Seat s) { return (s + 2) % kNumSeats; }
constexpr Seat eldest_hand(Seat dealer) { return next_seat(dealer); }
constexpr int deck_team(Seat dealer) { return team_of(dealer); }
constexpr int hand_team(Seat dealer) { return 1 - team_of(dealer); }

inline void check_seat(Seat s) {
  if (s < 0 || s >= kNumSeats) throw std::invalid_argument("seat out of range");
}

// Counter-based generator: output k of substream s is a pure function of
// (seed, s, k), so any attempt of a deal can be recomputed independently.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(mix(seed) ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  // Unbiased integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
      if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct DealResult {
  std::array<CardSet, kNumSeats> hands;
  CardSet table;
  Seat dealer = 3;

  bool operator==(const DealResult&) const = default;
};

inline int count_kings(CardSet cards) { return cards.count_rank(10); }

// One shuffle-and-deal attempt, without the three-kings check.
inline DealResult deal_attempt(std::uint64_t seed, Seat dealer, std::uint64_t attempt) {
  check_seat(dealer);
  std::array<int, kDeckSize> deck{};
  for (int i = 0; i < kDeckSize; ++i) deck[i] = i;
  CounterRng rng(seed, attempt);
  for (int i = kDeckSize - 1; i > 0; --i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(deck[i], deck[j]);
  }

  // Three cards at a time counterclockwise from the eldest hand; a pair goes
  // face up to the table after each of the first two rounds.
  DealResult out;
  out.dealer = dealer;
  int pos = 0;
  for (int round = 0; round < 3; ++round) {
    Seat s = eldest_hand(dealer);
    for (int p = 0; p < kNumSeats; ++p, s = next_seat(s))
      for (int k = 0; k < 3; ++k) out.hands[s].insert(Card::from_index(deck[pos++]));
    if (round < 2)
      for (int k = 0; k < 2; ++k) out.table.insert(Card::from_index(deck[pos++]));
  }
  return out;
}

// Deals until the table holds at most two kings.
inline DealResult deal(std::uint64_t seed, Seat dealer = 3) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    DealResult d = deal_attempt(seed, dealer, attempt);
    if (count_kings(d.table) < 3) return d;
  }
}

}  // namespace scopone
