#include "scopone/deal.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

namespace scopone {
namespace {

void expect_partition(const DealResult& d) {
  CardSet all;
  int total = 0;
  for (const CardSet& h : d.hands) {
    EXPECT_EQ(h.size(), kHandSize);
    EXPECT_FALSE(all.intersects(h));
    all |= h;
    total += h.size();
  }
  EXPECT_EQ(d.table.size(), kInitialTableSize);
  EXPECT_FALSE(all.intersects(d.table));
  all |= d.table;
  EXPECT_EQ(all, CardSet::full_deck());
  EXPECT_EQ(total + d.table.size(), kDeckSize);
}

TEST(DealTest, PartitionsTheDeck) {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    DealResult d = deal(seed);
    expect_partition(d);
    EXPECT_LE(count_kings(d.table), 2);
  }
}

TEST(DealTest, PureFunctionOfSeedAndDealer) {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFULL}) {
    for (Seat dealer = 0; dealer < kNumSeats; ++dealer) {
      EXPECT_EQ(deal(seed, dealer), deal(seed, dealer));
      EXPECT_EQ(deal(seed, dealer).dealer, dealer);
    }
  }
  EXPECT_NE(deal(1), deal(2));
}

TEST(DealTest, DealerRotationOnlyRotatesSeats) {
  DealResult a = deal(9, 3);
  DealResult b = deal(9, 0);
  for (int k = 0; k < kNumSeats; ++k) EXPECT_EQ(a.hands[(4 + k) % 4], b.hands[(1 + k) % 4]);
  EXPECT_EQ(a.table, b.table);
}

TEST(DealTest, RejectsBadDealer) { EXPECT_THROW(deal(0, 4), std::invalid_argument); }

TEST(DealTest, ThreeKingTableIsRedealt) {
  int found = 0;
  for (std::uint64_t seed = 0; seed < 20000 && found < 5; ++seed) {
    DealResult first = deal_attempt(seed, 3, 0);
    if (count_kings(first.table) < 3) continue;
    ++found;
    DealResult d = deal(seed);
    EXPECT_LE(count_kings(d.table), 2);
    std::uint64_t attempt = 1;
    while (count_kings(deal_attempt(seed, 3, attempt).table) >= 3) ++attempt;
    EXPECT_EQ(d, deal_attempt(seed, 3, attempt));
  }
  EXPECT_EQ(found, 5);
}

// Each card lands in each of the 5 zones (4 hands, table) about as often as
// its capacity share; a chi-square bound catches shuffle bias.
TEST(DealTest, ShuffleIsUniformAcrossZones) {
  constexpr int kDeals = 8000;
  std::array<std::array<int, 5>, kDeckSize> counts{};
  for (int seed = 0; seed < kDeals; ++seed) {
    DealResult d = deal_attempt(seed, 3, 0);
    for (int s = 0; s < 4; ++s)
      for (Card c : d.hands[s]) ++counts[c.index()][s];
    for (Card c : d.table) ++counts[c.index()][4];
  }
  double chi2 = 0;
  for (const auto& row : counts) {
    for (int z = 0; z < 5; ++z) {
      double expected = kDeals * (z < 4 ? 9.0 : 4.0) / 40.0;
      chi2 += (row[z] - expected) * (row[z] - expected) / expected;
    }
  }
  // 160 df minus constraints; 99.9% quantile of chi2(160) is about 226.
  EXPECT_LT(chi2, 226.0);
}

TEST(DealTest, GoldenSeedZero) {
  std::ifstream in(std::string(SCOPONE_FIXTURE_DIR) + "/deal_seed0.txt");
  ASSERT_TRUE(in) << "missing fixture";
  std::map<std::string, std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto colon = line.find(':');
    if (line.empty() || line[0] == '#' || colon == std::string::npos) continue;
    rows[line.substr(0, colon)] = line.substr(colon + 2);
  }
  DealResult d = deal(0, 3);
  for (int s = 0; s < kNumSeats; ++s) EXPECT_EQ(d.hands[s].str(), rows["hand " + std::to_string(s)]);
  EXPECT_EQ(d.table.str(), rows["table"]);
}

}  // namespace
}  // namespace scopone
