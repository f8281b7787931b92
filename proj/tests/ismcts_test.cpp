#include "scopone/search/ismcts.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "scopone/players.hpp"

namespace scopone {
namespace {

MatchState advance_random(std::uint64_t seed, int turns) {
  std::mt19937_64 rng(seed);
  MatchState s = MatchState::from_deal(deal(rng()));
  while (s.turn < turns) {
    auto moves = legal_moves(s);
    s.play(moves[rng() % moves.size()]);
  }
  return s;
}

MatchState branching_position(std::uint64_t seed, int turns) {
  for (std::uint64_t k = seed;; k += 1000) {
    MatchState s = advance_random(k, turns);
    if (legal_moves(s).size() >= 2) return s;
  }
}

TEST(IsmctsTest, IsuctReducesToUctWithoutTheFactorTwo) {
  EXPECT_DOUBLE_EQ(isuct_value(3, 5, 40, 0), 0.6);
  EXPECT_DOUBLE_EQ(isuct_value(3, 5, 40, 0), uct_value(3, 5, 40, 0));
  EXPECT_NEAR(isuct_value(3, 5, 40, std::sqrt(2.0)), uct_value(3, 5, 40, 1.0), 1e-12);
}

TEST(IsmctsTest, AvailabilityInvariants) {
  for (DeterminizerKind kind : {DeterminizerKind::kRandom, DeterminizerKind::kCardGuessing}) {
    for (int turns : {0, 9, 22}) {
      MatchState s = branching_position(40 + turns, turns);
      PlayerView v = project(s, s.current);
      SearchConfig cfg;
      cfg.iterations = 800;
      cfg.seed = 3;
      Ismcts search(cfg, kind);
      Move m = search.choose(v);
      EXPECT_TRUE(is_legal_move(v.hand, v.table, m));
      const auto& nodes = search.nodes();
      EXPECT_EQ(nodes[0].visits, cfg.iterations);
      int root_children = 0;
      for (std::size_t i = 1; i < nodes.size(); ++i) {
        const InfoSetNode& n = nodes[i];
        ASSERT_LE(n.visits, n.availability) << "node " << i;
        ASSERT_GE(n.visits, 1);
        ASSERT_LE(n.availability, nodes[n.parent].visits);
        EXPECT_NEAR(n.reward[0] + n.reward[1], 0, 1e-9);
        if (n.parent == 0) {
          ++root_children;
          // Root moves are legal in every determinization.
          EXPECT_EQ(n.availability, cfg.iterations);
        }
      }
      int sum = 0;
      for (int c : nodes[0].children) sum += nodes[c].visits;
      EXPECT_EQ(sum, cfg.iterations);
      EXPECT_EQ(root_children, static_cast<int>(legal_moves(s).size()));
    }
  }
}

TEST(IsmctsTest, SingleLegalMove) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    MatchState s = advance_random(seed, 32 + static_cast<int>(seed % 4));
    auto moves = legal_moves(s);
    if (moves.size() != 1) continue;
    SearchConfig cfg;
    cfg.iterations = 50;
    EXPECT_EQ(ismcts_choose(project(s, s.current), cfg, DeterminizerKind::kRandom), moves.front());
    return;
  }
  FAIL() << "no forced position found";
}

TEST(DeterminizeTest, TwoUnseenCardsSplitEvenly) {
  // Turn 33: the seat that moves at turn 34 sees two unseen cards, one in
  // each of the two hands still holding a card.
  MatchState s = advance_random(8, 33);
  Seat observer = next_seat(s.current);
  PlayerView v = project(s, observer);
  ASSERT_EQ(v.unseen().size(), 2);
  Card c = v.unseen().first();
  SearchRng rng(1);
  Determinizer det(v, DeterminizerKind::kRandom);
  int with_current = 0;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    MatchState d = det.sample(rng);
    ASSERT_EQ(project(d, observer), v);
    with_current += d.hands[s.current].contains(c);
  }
  EXPECT_NEAR(with_current / double(kDraws), 0.5, 0.05);
}

TEST(DeterminizeTest, ProjectionMatchesViewEverywhere) {
  SearchRng rng(2);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    MatchState s = advance_random(seed, static_cast<int>(seed % 36));
    for (Seat o = 0; o < kNumSeats; ++o) {
      PlayerView v = project(s, o);
      GuessState gs = guess_from_history(v);
      for (DeterminizerKind kind : {DeterminizerKind::kRandom, DeterminizerKind::kCardGuessing}) {
        MatchState d = determinize(v, kind, &gs, rng);
        ASSERT_EQ(project(d, o), v);
        if (kind != DeterminizerKind::kCardGuessing || !make_sampler(gs, v.hand_sizes).feasible()) continue;
        for (Seat t = 0; t < kNumSeats; ++t) {
          if (t == o) continue;
          ASSERT_TRUE(gs.candidates[t].contains_all(d.hands[t]));
          ASSERT_TRUE(d.hands[t].contains_all(gs.certain[t]));
        }
      }
    }
  }
}

TEST(DeterminizeTest, CardGuessingHonoursForcedSets) {
  MatchState s = advance_random(9, 12);
  PlayerView v = project(s, 0);
  GuessState gs = guess_from_history(v, {false, false});
  gs = with_known_cards(gs, 1, s.hands[1]);
  EXPECT_EQ(gs.certain[1], s.hands[1]);
  SearchRng rng(4);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(determinize(v, DeterminizerKind::kCardGuessing, &gs, rng).hands[1], s.hands[1]);
}

// At the node after the observer's move, each opponent move's availability
// over the passes through that node estimates the probability that the
// move is legal in a random determinization.
TEST(IsmctsTest, AvailabilityTracksLegalProbability) {
  MatchState s = branching_position(50, 24);
  PlayerView v = project(s, s.current);
  SearchConfig cfg;
  cfg.iterations = 20000;
  cfg.uct_c = 0.7;
  cfg.seed = 6;
  Ismcts search(cfg, DeterminizerKind::kRandom);
  search.choose(v);
  const auto& nodes = search.nodes();
  int child = nodes[0].children.front();
  for (int c : nodes[0].children)
    if (nodes[c].visits > nodes[child].visits) child = c;
  int passes = nodes[child].visits - 1;
  ASSERT_GT(passes, 2000);
  Seat next = next_seat(s.current);
  double p_hold = double(v.hand_sizes[next]) / v.unseen().size();
  int checked = 0;
  for (int g : nodes[child].children) {
    if (nodes[g].availability < 50) continue;
    // Legality of a move depends only on holding its card.
    EXPECT_NEAR(nodes[g].availability / double(passes), p_hold, 0.03) << nodes[g].move.str();
    ++checked;
  }
  EXPECT_GT(checked, 3);
}

// With every hidden card known, ISMCTS over the single determinization and
// MCTS over the true state should prefer the same moves.
TEST(IsmctsTest, MatchesMctsOnFullyObservableEndgames) {
  int positions = 0, agree = 0;
  double total_variation = 0;
  for (std::uint64_t seed = 0; positions < 25; ++seed) {
    MatchState s = advance_random(1000 + seed, 24);
    auto moves = legal_moves(s);
    if (moves.size() < 3) continue;
    PlayerView v = project(s, s.current);
    GuessState gs = guess_from_history(v, {false, false});
    for (Seat t = 0; t < kNumSeats; ++t)
      if (t != v.seat) gs = with_known_cards(gs, t, s.hands[t]);
    std::map<Move, int> a, b;
    constexpr int kRuns = 60;
    for (int r = 0; r < kRuns; ++r) {
      SearchConfig cfg;
      cfg.iterations = 400;
      cfg.seed = static_cast<std::uint64_t>(r) * 7919 + seed;
      ++a[mcts_choose(s, cfg)];
      cfg.uct_c = 2.0 * std::sqrt(2.0);
      ++b[ismcts_choose(v, cfg, DeterminizerKind::kCardGuessing, &gs)];
    }
    double tv = 0;
    for (const Move& m : moves) tv += std::abs(a[m] - b[m]) / double(kRuns);
    total_variation += tv / 2;
    auto mode = [](const std::map<Move, int>& f) {
      return std::max_element(f.begin(), f.end(), [](auto& x, auto& y) { return x.second < y.second; })->first;
    };
    ++positions;
    if (mode(a) == mode(b) || a[mode(b)] * 2 >= a[mode(a)]) ++agree;
  }
  EXPECT_GE(agree, positions - 2) << agree << "/" << positions;
  EXPECT_LT(total_variation / positions, 0.25);
}

TEST(IsmctsTest, SeededDeterminism) {
  MatchState s = branching_position(60, 7);
  PlayerView v = project(s, s.current);
  SearchConfig cfg;
  cfg.iterations = 400;
  cfg.seed = 12;
  EXPECT_EQ(ismcts_choose(v, cfg, DeterminizerKind::kRandom), ismcts_choose(v, cfg, DeterminizerKind::kRandom));
  EXPECT_EQ(ismcts_choose(v, cfg, DeterminizerKind::kCardGuessing),
            ismcts_choose(v, cfg, DeterminizerKind::kCardGuessing));
  auto p1 = make_player("ismcts:iters=300,det=cgs", 3);
  auto p2 = make_player("ismcts:iters=300,det=cgs", 3);
  EXPECT_EQ(p1->choose(v), p2->choose(v));
}

}  // namespace
}  // namespace scopone
