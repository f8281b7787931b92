#include "scopone/experiments/report.hpp"
#include "scopone/experiments/tournament.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace scopone {
namespace {

ExperimentPlan small_plan(int decks) {
  ExperimentPlan plan;
  plan.deck_count = decks;
  plan.deck_seed = 11;
  plan.repeats = 2;
  plan.strategies = {{"greedy", parse_strategy("greedy")},
                     {"random", parse_strategy("random")},
                     {"cs", parse_strategy("cs")}};
  return plan;
}

TEST(TournamentTest, EmptyPlanGivesEmptyTable) {
  ExperimentPlan plan = small_plan(10);
  auto t = run_plan(plan);
  EXPECT_TRUE(t.cells.empty());
  EXPECT_TRUE(t.errors.empty());
  plan.pairings = {{"greedy", "random"}};
  plan.deck_count = 0;
  t = run_plan(plan);
  ASSERT_EQ(t.cells.size(), 2u);
  EXPECT_EQ(t.cells[0].total(), 0);
  EXPECT_EQ(t.cells[0].win_rate(), 0);
}

TEST(TournamentTest, RoundRobinCoversEveryCell) {
  ExperimentPlan plan = small_plan(6);
  for (const auto& a : {"greedy", "random", "cs"})
    for (const auto& b : {"greedy", "random", "cs"}) plan.pairings.push_back({a, b});
  auto t = run_plan(plan);
  ASSERT_EQ(t.cells.size(), 9u);
  for (const auto& a : {"greedy", "random", "cs"})
    for (const auto& b : {"greedy", "random", "cs"}) {
      const CellResult* c = t.find(a, b);
      ASSERT_NE(c, nullptr);
      // Only search strategies are repeated per deck.
      EXPECT_EQ(c->total(), 6);
    }
}

// Self-play at each iteration count: the deck team wins more often.
TEST(TournamentTest, DeckTeamLeadsInSelfPlayAtEveryIterationCount) {
  for (int iters : {100, 400}) {
    ExperimentPlan plan;
    plan.deck_count = 200;
    plan.deck_seed = 21;
    plan.repeats = 1;
    std::string spec = "mcts:iters=" + std::to_string(iters);
    plan.strategies = {{"m", parse_strategy(spec)}};
    plan.pairings = {{"m", "m"}};
    auto t = run_plan(plan);
    ASSERT_EQ(t.cells.size(), 1u);
    const CellResult& c = t.cells[0];
    auto z = stats::two_proportion_z(c.losses, c.total(), c.wins, c.total());
    EXPECT_GT(z.statistic, 1.645) << iters << " iterations: hand " << c.wins << ", deck " << c.losses;
  }
}

TEST(TournamentTest, SymmetricPlansAddSwappedPairings) {
  ExperimentPlan plan = small_plan(3);
  plan.pairings = {{"greedy", "cs"}, {"cs", "greedy"}, {"random", "random"}};
  auto p = plan.expanded_pairings();
  EXPECT_EQ(p.size(), 3u);
  plan.symmetric = false;
  plan.pairings = {{"greedy", "cs"}};
  EXPECT_EQ(plan.expanded_pairings().size(), 1u);
  EXPECT_THROW(plan.strategy("nobody"), std::invalid_argument);
}

TEST(TournamentTest, RatesMatchReplayedLogs) {
  ExperimentPlan plan = small_plan(40);
  plan.strategies.emplace_back("mcts", parse_strategy("mcts:iters=40"));
  plan.pairings = {{"mcts", "greedy"}, {"random", "cs"}};
  plan.threads = 3;
  std::map<std::pair<std::string, std::string>, std::array<int, 3>> recount;
  auto t = run_plan(plan, {}, [&](const Pairing& p, const MatchResult& r) {
    MatchState s = replay(r.log);
    auto totals = score_match(s).totals();
    int h = totals[r.hand_team], d = totals[1 - r.hand_team];
    auto& c = recount[{p.hand, p.deck}];
    ++c[h > d ? 0 : h < d ? 1 : 2];
  });
  ASSERT_TRUE(t.errors.empty());
  ASSERT_EQ(t.cells.size(), 4u);
  for (const auto& c : t.cells) {
    auto counts = recount[{c.hand, c.deck}];
    EXPECT_EQ(c.wins, counts[0]) << c.hand << " vs " << c.deck;
    EXPECT_EQ(c.losses, counts[1]);
    EXPECT_EQ(c.ties, counts[2]);
    EXPECT_EQ(c.total(), 40 * plan.repeats_for({c.hand, c.deck}));
  }
  EXPECT_EQ(t.find("mcts", "greedy")->total(), 80);
  EXPECT_EQ(t.find("cs", "random")->total(), 40);
}

TEST(TournamentTest, ResultsDoNotDependOnThreadCount) {
  ExperimentPlan plan = small_plan(30);
  plan.strategies.emplace_back("ismcts", parse_strategy("ismcts:iters=30"));
  plan.pairings = {{"ismcts", "random"}};
  plan.threads = 1;
  auto a = run_plan(plan);
  plan.threads = 4;
  auto b = run_plan(plan);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].wins, b.cells[i].wins);
    EXPECT_EQ(a.cells[i].losses, b.cells[i].losses);
    EXPECT_EQ(a.cells[i].hand_points, b.cells[i].hand_points);
  }
}

TEST(TournamentTest, RunMatchIsDeterministic) {
  DealResult d = deal(77);
  auto a = run_match(d, parse_strategy("ismcts:iters=50"), parse_strategy("mcts:iters=50"), 5);
  auto b = run_match(d, parse_strategy("ismcts:iters=50"), parse_strategy("mcts:iters=50"), 5);
  EXPECT_EQ(a.log.moves, b.log.moves);
  EXPECT_EQ(a.score, b.score);
  EXPECT_EQ(a.hand_team, hand_team(d.dealer));
  EXPECT_EQ(a.move_seconds[0].size() + a.move_seconds[1].size(), std::size_t(kTurnsPerMatch));
}

TEST(TournamentTest, SingleValueSweepEqualsPlan) {
  ExperimentPlan plan = small_plan(12);
  plan.repeats = 1;
  auto subject = parse_strategy("mcts:iters=30");
  auto baseline = parse_strategy("greedy");
  auto points = sweep(SweepAxis::kUctC, {"0.7"}, subject, baseline, plan);
  ASSERT_EQ(points.size(), 1u);
  plan.strategies = {{"subject", with_axis_value(subject, SweepAxis::kUctC, "0.7")}, {"baseline", baseline}};
  plan.pairings = {{"subject", "baseline"}};
  auto t = run_plan(plan);
  EXPECT_EQ(points[0].subject_hand.wins, t.find("subject", "baseline")->wins);
  EXPECT_EQ(points[0].subject_hand.losses, t.find("subject", "baseline")->losses);
  EXPECT_EQ(points[0].subject_deck.wins, t.find("baseline", "subject")->wins);
  EXPECT_EQ(points[0].subject_deck.total(), 12);
}

TEST(TournamentTest, SweepAxes) {
  auto base = parse_strategy("ismcts");
  EXPECT_DOUBLE_EQ(with_axis_value(base, SweepAxis::kUctC, "0.25").search.uct_c, 0.25);
  EXPECT_EQ(with_axis_value(base, SweepAxis::kReward, "wl").search.reward, RewardFn::kWinLoss);
  EXPECT_EQ(with_axis_value(base, SweepAxis::kSim, "crs").search.sim.kind, SimKind::kCardRandom);
  EXPECT_DOUBLE_EQ(with_axis_value(base, SweepAxis::kEpsilon, "0.4").search.sim.epsilon, 0.4);
  EXPECT_EQ(with_axis_value(base, SweepAxis::kIterations, "123").search.iterations, 123);
  EXPECT_EQ(with_axis_value(base, SweepAxis::kDeterminizer, "cgs").det, DeterminizerKind::kCardGuessing);
  EXPECT_THROW(with_axis_value(base, SweepAxis::kDeterminizer, "x"), std::invalid_argument);
  EXPECT_THROW(with_axis_value(parse_strategy("mcts"), SweepAxis::kDeterminizer, "cgs"), std::invalid_argument);
  EXPECT_THROW(with_axis_value(parse_strategy("greedy"), SweepAxis::kUctC, "1"), std::invalid_argument);
  EXPECT_THROW(with_axis_value(base, SweepAxis::kIterations, "0"), std::invalid_argument);
  EXPECT_THROW(parse_axis("depth"), std::invalid_argument);
}

TEST(TournamentTest, TimingErrorsAndShape) {
  EXPECT_THROW(measure_timing(parse_strategy("mcts"), {10}, 0, 1), std::invalid_argument);
  EXPECT_THROW(measure_timing(parse_strategy("greedy"), {10}, 3, 1), std::invalid_argument);
  auto pts = measure_timing(parse_strategy("ismcts"), {10, 200}, 5, 1);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].iterations, 10);
  EXPECT_EQ(pts[1].seconds.n, 5u);
  EXPECT_GT(pts[1].seconds.mean, 0);
  std::ostringstream os;
  write_timing_csv(os, pts);
  std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

TEST(PlanTest, ParsesPlanFile) {
  std::istringstream in(R"PLAN(# test plan
deck_count = 50
deck_seed = 7
repeats = 3
symmetric = false
threads = 2
ci = wilson

[strategies]
g = greedy
m = "mcts:iters=100,sim=egs(0.1)"   # quoted
r = random

[pairings]
pairing = m vs g
round_robin = g, r
)PLAN");
  ExperimentPlan plan = parse_plan(in);
  EXPECT_EQ(plan.deck_count, 50);
  EXPECT_EQ(plan.deck_seed, 7u);
  EXPECT_EQ(plan.repeats, 3);
  EXPECT_FALSE(plan.symmetric);
  EXPECT_EQ(plan.threads, 2);
  EXPECT_TRUE(plan.wilson);
  ASSERT_EQ(plan.strategies.size(), 3u);
  EXPECT_EQ(plan.strategy("m").search.sim.kind, SimKind::kEpsilonGreedy);
  ASSERT_EQ(plan.pairings.size(), 5u);
  EXPECT_EQ(plan.pairings[0], (Pairing{"m", "g"}));
  EXPECT_EQ(plan.pairings[4], (Pairing{"r", "r"}));
}

TEST(PlanTest, RejectsBadPlans) {
  for (const char* text : {"deck_count = x\n", "bogus = 1\n", "[strategies]\na = minimax\n",
                           "[strategies]\na = greedy\na = cs\n", "[pairings]\npairing = a vs b\n",
                           "[strategies]\na = greedy\n[pairings]\npairing = a b\n", "[weird]\n", "ci = exact\n",
                           "deck_count = -4\n", "no equals sign\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(parse_plan(in), std::invalid_argument) << text;
  }
}

TEST(ReportTest, CsvAndSummary) {
  ResultTable t;
  CellResult c{"a", "b"};
  c.wins = 3, c.losses = 15, c.ties = 3;
  t.cells.push_back(c);
  std::ostringstream csv, sum;
  write_results_csv(csv, t);
  EXPECT_NE(csv.str().find("a,b,21,3,15,3,0.142857,0,0.292"), std::string::npos) << csv.str();
  write_summary(sum, t);
  EXPECT_NE(sum.str().find("14.3 [0.0-29.3]"), std::string::npos) << sum.str();
  EXPECT_NE(sum.str().find("hand 14.3%, deck 71.4%, ties 14.3%"), std::string::npos);
}

TEST(PlanTest, ShippedPlansParse) {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(SCOPONE_PLAN_DIR)) {
    if (e.path().extension() != ".plan") continue;
    std::ifstream in(e.path());
    ExperimentPlan plan = parse_plan(in);
    EXPECT_FALSE(plan.expanded_pairings().empty()) << e.path();
    for (const auto& p : plan.expanded_pairings()) {
      EXPECT_NO_THROW(plan.strategy(p.hand));
      EXPECT_NO_THROW(plan.strategy(p.deck));
    }
    ++n;
  }
  EXPECT_GE(n, 4);
}

}  // namespace
}  // namespace scopone
