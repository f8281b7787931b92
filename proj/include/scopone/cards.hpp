#pragma once

// Card and card-set primitives for the 40-card Italian deck.
//
// Cards are indexed 0..39 as (rank - 1) * 4 + suit, so the four cards of a
// rank occupy one nibble of a 64-bit mask. Canonical card order is index
// order: by rank, then coins < swords < cups < batons.

#include <array>
#include <bit>
#include <cstdint>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scopone {

enum class Suit : std::uint8_t { kCoins = 0, kSwords = 1, kCups = 2, kBatons = 3 };

inline constexpr int kNumSuits = 4;
inline constexpr int kNumRanks = 10;
inline constexpr int kDeckSize = 40;

// French letters used by the text encoding: coins=d, swords=s, cups=h, batons=c.
inline constexpr char kSuitLetters[kNumSuits] = {'d', 's', 'h', 'c'};
inline constexpr char kRankSymbols[kNumRanks] = {'A', '2', '3', '4', '5', '6', '7', 'J', 'Q', 'K'};

// Primiera values indexed by rank (1..10).
inline constexpr std::array<int, kNumRanks + 1> kPrimieraByRank = {0, 16, 12, 13, 14, 15, 18, 21, 10, 10, 10};

class Card {
 public:
  constexpr Card() = default;
  constexpr Card(int rank, Suit suit) : index_(static_cast<std::uint8_t>((rank - 1) * 4 + static_cast<int>(suit))) {
    if (rank < 1 || rank > kNumRanks) throw std::invalid_argument("card rank out of range");
  }

  static constexpr Card from_index(int index) {
    if (index < 0 || index >= kDeckSize) throw std::invalid_argument("card index out of range");
    Card c;
    c.index_ = static_cast<std::uint8_t>(index);
    return c;
  }

  constexpr int index() const { return index_; }
  constexpr int rank() const { return index_ / 4 + 1; }
  constexpr Suit suit() const { return static_cast<Suit>(index_ % 4); }
  constexpr bool is_coin() const { return suit() == Suit::kCoins; }

  constexpr auto operator<=>(const Card&) const = default;

  std::string str() const { return {kRankSymbols[rank() - 1], kSuitLetters[index_ % 4]}; }

 private:
  std::uint8_t index_ = 0;
};

inline constexpr Card kSettebello{7, Suit::kCoins};

constexpr int primiera_value(Card card) { return kPrimieraByRank[card.rank()]; }

inline std::optional<Card> parse_card(std::string_view text) {
  if (text.size() != 2) return std::nullopt;
  int rank = 0;
  for (int r = 0; r < kNumRanks; ++r)
    if (kRankSymbols[r] == text[0]) rank = r + 1;
  int suit = -1;
  for (int s = 0; s < kNumSuits; ++s)
    if (kSuitLetters[s] == text[1]) suit = s;
  if (rank == 0 || suit < 0) return std::nullopt;
  return Card(rank, static_cast<Suit>(suit));
}

inline Card card_from_string(std::string_view text) {
  auto c = parse_card(text);
  if (!c) throw std::invalid_argument("bad card text: " + std::string(text));
  return *c;
}

// Set of cards backed by a 40-bit mask.
class CardSet {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Card;
    using difference_type = std::ptrdiff_t;
    using pointer = const Card*;
    using reference = Card;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t bits) : bits_(bits) {}
    constexpr Card operator*() const { return Card::from_index(std::countr_zero(bits_)); }
    constexpr iterator& operator++() {
      bits_ &= bits_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      auto old = *this;
      ++*this;
      return old;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t bits_ = 0;
  };

  constexpr CardSet() = default;
  constexpr explicit CardSet(std::uint64_t bits) : bits_(bits) {}
  constexpr CardSet(std::initializer_list<Card> cards) {
    for (Card c : cards) insert(c);
  }

  static constexpr CardSet full_deck() { return CardSet((std::uint64_t{1} << kDeckSize) - 1); }
  static constexpr CardSet of_rank(int rank) { return CardSet(std::uint64_t{0xF} << ((rank - 1) * 4)); }
  static constexpr CardSet of_suit(Suit suit) {
    std::uint64_t bits = 0;
    for (int r = 0; r < kNumRanks; ++r) bits |= std::uint64_t{1} << (r * 4 + static_cast<int>(suit));
    return CardSet(bits);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(Card c) const { return (bits_ >> c.index()) & 1U; }
  constexpr bool contains_all(CardSet other) const { return (bits_ & other.bits_) == other.bits_; }
  constexpr bool intersects(CardSet other) const { return (bits_ & other.bits_) != 0; }

  constexpr void insert(Card c) { bits_ |= std::uint64_t{1} << c.index(); }
  constexpr void erase(Card c) { bits_ &= ~(std::uint64_t{1} << c.index()); }

  constexpr Card first() const { return Card::from_index(std::countr_zero(bits_)); }
  constexpr int count_rank(int rank) const { return std::popcount((bits_ >> ((rank - 1) * 4)) & 0xF); }
  constexpr CardSet rank_cards(int rank) const { return *this & of_rank(rank); }

  // Sum of ranks of all cards in the set.
  constexpr int rank_sum() const {
    int sum = 0;
    for (int r = 1; r <= kNumRanks; ++r) sum += r * count_rank(r);
    return sum;
  }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  constexpr CardSet operator|(CardSet o) const { return CardSet(bits_ | o.bits_); }
  constexpr CardSet operator&(CardSet o) const { return CardSet(bits_ & o.bits_); }
  constexpr CardSet operator-(CardSet o) const { return CardSet(bits_ & ~o.bits_); }
  constexpr CardSet& operator|=(CardSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr CardSet& operator&=(CardSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  constexpr CardSet& operator-=(CardSet o) {
    bits_ &= ~o.bits_;
    return *this;
  }
  constexpr auto operator<=>(const CardSet&) const = default;

  std::vector<Card> to_vector() const { return {begin(), end()}; }

  // Space-separated canonical encoding, e.g. "3s 4c 5d Qs".
  std::string str() const {
    std::string out;
    for (Card c : *this) {
      if (!out.empty()) out += ' ';
      out += c.str();
    }
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

inline CardSet parse_card_set(std::string_view text) {
  CardSet out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == ',')) ++pos;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != ',') ++end;
    if (end > pos) {
      Card c = card_from_string(text.substr(pos, end - pos));
      if (out.contains(c)) throw std::invalid_argument("duplicate card in set: " + c.str());
      out.insert(c);
    }
    pos = end;
  }
  return out;
}

// Highest primiera value per suit; 0 marks a missing suit.
inline std::array<int, kNumSuits> best_primiera_per_suit(CardSet cards) {
  std::array<int, kNumSuits> best{};
  for (Card c : cards) {
    int s = static_cast<int>(c.suit());
    if (primiera_value(c) > best[s]) best[s] = primiera_value(c);
  }
  return best;
}

}  // namespace scopone
