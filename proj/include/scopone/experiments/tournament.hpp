#pragma once

// Matches, tournaments over a fixed deck list, parameter sweeps and timing.

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "scopone/experiments/stats.hpp"
#include "scopone/match_log.hpp"
#include "scopone/players.hpp"

namespace scopone {

struct MatchResult {
  MatchLog log;
  MatchScore score;
  int hand_team = 0;
  std::array<std::vector<double>, 2> move_seconds;  // per team

  // +1 hand team wins, -1 deck team wins, 0 tie.
  int outcome() const {
    int w = score.winner();
    if (w < 0) return 0;
    return w == hand_team ? 1 : -1;
  }
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return CounterRng::mix(a ^ CounterRng::mix(b + 0x9E3779B97F4A7C15ULL));
}

// Plays one match; the hand team's seats use `hand`, the deck team's `deck`.
// Fair players only ever see their own projection of the state.
inline MatchResult run_match(const DealResult& d, const StrategySpec& hand, const StrategySpec& deck,
                             std::uint64_t seed) {
  MatchResult out;
  out.hand_team = hand_team(d.dealer);
  std::array<std::unique_ptr<Player>, kNumSeats> players;
  for (Seat s = 0; s < kNumSeats; ++s)
    players[s] = make_player(team_of(s) == out.hand_team ? hand : deck, mix_seed(seed, static_cast<std::uint64_t>(s)));
  MatchState state = MatchState::from_deal(d);
  while (!state.is_over()) {
    Player& p = *players[state.current];
    auto start = std::chrono::steady_clock::now();
    Move m = p.needs_full_state() ? p.choose_full(state) : p.choose(project(state, state.current));
    std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    out.move_seconds[team_of(state.current)].push_back(took.count());
    if (!is_legal_move(state.hands[state.current], state.table, m))
      throw RulesError(RulesError::Kind::kIllegalMove, "player produced illegal move " + m.str());
    state.play(m);
  }
  out.score = score_match(state);
  out.log = make_log(d, state, std::nullopt);
  out.log.meta = {{"hand", hand.str()}, {"deck", deck.str()}, {"match_seed", std::to_string(seed)}};
  return out;
}

inline std::vector<DealResult> make_decks(int count, std::uint64_t deck_seed, Seat dealer = 3) {
  std::vector<DealResult> decks;
  decks.reserve(count);
  for (int i = 0; i < count; ++i) decks.push_back(deal(mix_seed(deck_seed, static_cast<std::uint64_t>(i)), dealer));
  return decks;
}

struct Pairing {
  std::string hand;
  std::string deck;
  bool operator==(const Pairing&) const = default;
};

struct ExperimentPlan {
  int deck_count = 1000;
  std::uint64_t deck_seed = 1;
  int repeats = 10;
  bool symmetric = true;
  int threads = 1;
  std::vector<std::pair<std::string, StrategySpec>> strategies;
  std::vector<Pairing> pairings;
  std::string out_dir;
  bool write_logs = false;
  bool wilson = false;

  const StrategySpec& strategy(const std::string& name) const {
    for (const auto& [n, s] : strategies)
      if (n == name) return s;
    throw std::invalid_argument("unknown strategy name: " + name);
  }

  // Pairings to run, with swapped roles added for symmetric plans.
  std::vector<Pairing> expanded_pairings() const {
    std::vector<Pairing> out;
    auto add = [&](const Pairing& p) {
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    };
    for (const auto& p : pairings) {
      add(p);
      if (symmetric) add({p.deck, p.hand});
    }
    return out;
  }

  int repeats_for(const Pairing& p) const {
    return strategy(p.hand).is_search() || strategy(p.deck).is_search() ? std::max(1, repeats) : 1;
  }
};

struct CellResult {
  CellResult() = default;
  CellResult(std::string h, std::string d) : hand(std::move(h)), deck(std::move(d)) {}

  std::string hand;
  std::string deck;
  int wins = 0;  // hand-team wins
  int losses = 0;
  int ties = 0;
  long hand_points = 0;
  long deck_points = 0;
  std::vector<double> hand_seconds;
  std::vector<double> deck_seconds;

  int total() const { return wins + losses + ties; }
  double win_rate() const { return total() ? double(wins) / total() : 0; }
  double loss_rate() const { return total() ? double(losses) / total() : 0; }
  double tie_rate() const { return total() ? double(ties) / total() : 0; }

  void add(const MatchResult& r) {
    int o = r.outcome();
    (o > 0 ? wins : o < 0 ? losses : ties)++;
    hand_points += r.score.team[r.hand_team].total;
    deck_points += r.score.team[1 - r.hand_team].total;
    hand_seconds.insert(hand_seconds.end(), r.move_seconds[r.hand_team].begin(), r.move_seconds[r.hand_team].end());
    deck_seconds.insert(deck_seconds.end(), r.move_seconds[1 - r.hand_team].begin(),
                        r.move_seconds[1 - r.hand_team].end());
  }

  void merge(const CellResult& o) {
    wins += o.wins;
    losses += o.losses;
    ties += o.ties;
    hand_points += o.hand_points;
    deck_points += o.deck_points;
    hand_seconds.insert(hand_seconds.end(), o.hand_seconds.begin(), o.hand_seconds.end());
    deck_seconds.insert(deck_seconds.end(), o.deck_seconds.begin(), o.deck_seconds.end());
  }
};

struct ResultTable {
  std::vector<CellResult> cells;
  std::vector<std::string> errors;

  const CellResult* find(const std::string& hand, const std::string& deck) const {
    for (const auto& c : cells)
      if (c.hand == hand && c.deck == deck) return &c;
    return nullptr;
  }
};

using ProgressFn = std::function<void(int done, int total)>;

struct MatchTask {
  int cell = 0;
  int deck = 0;
  int repeat = 0;
};

inline std::uint64_t match_seed(std::uint64_t deck_seed, int deck, int repeat) {
  return mix_seed(mix_seed(deck_seed ^ 0xA5A5A5A5ULL, static_cast<std::uint64_t>(deck)), static_cast<std::uint64_t>(repeat));
}

// Runs every pairing on the same deck list. `on_match` sees each finished
// match (from worker threads, serialized).
inline ResultTable run_plan(const ExperimentPlan& plan, ProgressFn progress = {},
                            std::function<void(const Pairing&, const MatchResult&)> on_match = {}) {
  ResultTable table;
  auto pairings = plan.expanded_pairings();
  if (pairings.empty()) return table;
  auto decks = make_decks(plan.deck_count, plan.deck_seed);
  std::vector<MatchTask> tasks;
  for (int c = 0; c < static_cast<int>(pairings.size()); ++c) {
    table.cells.push_back(CellResult{pairings[c].hand, pairings[c].deck});
    int reps = plan.repeats_for(pairings[c]);
    for (int d = 0; d < plan.deck_count; ++d)
      for (int r = 0; r < reps; ++r) tasks.push_back({c, d, r});
  }

  std::atomic<std::size_t> next{0};
  std::atomic<int> done{0};
  std::mutex mu;
  auto worker = [&] {
    std::vector<CellResult> local(table.cells.size());
    std::vector<std::string> local_errors;
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      const MatchTask& t = tasks[i];
      const Pairing& p = pairings[t.cell];
      try {
        MatchResult r = run_match(decks[t.deck], plan.strategy(p.hand), plan.strategy(p.deck),
                                  match_seed(plan.deck_seed, t.deck, t.repeat));
        local[t.cell].add(r);
        if (on_match) {
          std::lock_guard lock(mu);
          on_match(p, r);
        }
      } catch (const std::exception& e) {
        local_errors.push_back(p.hand + " vs " + p.deck + " deck " + std::to_string(t.deck) + ": " + e.what());
      }
      int n = ++done;
      if (progress) {
        std::lock_guard lock(mu);
        progress(n, static_cast<int>(tasks.size()));
      }
    }
    std::lock_guard lock(mu);
    for (std::size_t c = 0; c < local.size(); ++c) table.cells[c].merge(local[c]);
    table.errors.insert(table.errors.end(), local_errors.begin(), local_errors.end());
  };
  int threads = std::max(1, plan.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return table;
}

enum class SweepAxis { kUctC, kReward, kSim, kEpsilon, kIterations, kDeterminizer };

inline SweepAxis parse_axis(const std::string& s) {
  if (s == "uct_c" || s == "c") return SweepAxis::kUctC;
  if (s == "reward") return SweepAxis::kReward;
  if (s == "sim") return SweepAxis::kSim;
  if (s == "epsilon") return SweepAxis::kEpsilon;
  if (s == "iterations" || s == "iters") return SweepAxis::kIterations;
  if (s == "determinizator" || s == "det") return SweepAxis::kDeterminizer;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

inline StrategySpec with_axis_value(StrategySpec spec, SweepAxis axis, const std::string& value) {
  if (!spec.is_search()) throw std::invalid_argument("sweeps need a search strategy");
  switch (axis) {
    case SweepAxis::kUctC: spec.search.uct_c = std::stod(value); break;
    case SweepAxis::kReward: spec.search.reward = parse_reward(value); break;
    case SweepAxis::kSim: spec.search.sim = parse_sim(value); break;
    case SweepAxis::kEpsilon: spec.search.sim = {SimKind::kEpsilonGreedy, std::stod(value)}; break;
    case SweepAxis::kIterations: spec.search.iterations = std::stoi(value); break;
    case SweepAxis::kDeterminizer:
      if (spec.kind != StrategyKind::kIsmcts) throw std::invalid_argument("determinizer axis needs ismcts");
      spec.det = value == "cgs" ? DeterminizerKind::kCardGuessing : DeterminizerKind::kRandom;
      if (value != "cgs" && value != "random") throw std::invalid_argument("unknown determinizer: " + value);
      break;
  }
  spec.search.validate();
  return spec;
}

struct SweepPoint {
  std::string value;
  CellResult subject_hand;  // subject as hand team
  CellResult subject_deck;  // subject as deck team
};

// Runs the subject, modified along `axis`, against a fixed baseline in both
// roles, once per value.
inline std::vector<SweepPoint> sweep(SweepAxis axis, const std::vector<std::string>& values, const StrategySpec& subject,
                                     const StrategySpec& baseline, ExperimentPlan plan, ProgressFn progress = {}) {
  std::vector<SweepPoint> out;
  for (const auto& v : values) {
    plan.strategies = {{"subject", with_axis_value(subject, axis, v)}, {"baseline", baseline}};
    plan.pairings = {{"subject", "baseline"}};
    plan.symmetric = true;
    ResultTable t = run_plan(plan, progress);
    if (!t.errors.empty()) throw std::runtime_error("sweep match failed: " + t.errors.front());
    out.push_back({v, *t.find("subject", "baseline"), *t.find("baseline", "subject")});
  }
  return out;
}

struct TimingPoint {
  int iterations = 0;
  stats::Summary seconds;
};

// Times single decisions on mid-game states reached by random play.
inline std::vector<TimingPoint> measure_timing(const StrategySpec& spec, const std::vector<int>& iterations, int samples,
                                               std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("timing needs at least one sample");
  if (!spec.is_search()) throw std::invalid_argument("timing needs a search strategy");
  std::vector<MatchState> states;
  for (int i = 0; i < samples; ++i) {
    MatchState s = MatchState::from_deal(deal(mix_seed(seed, static_cast<std::uint64_t>(i))));
    RandomPlayer walker(mix_seed(seed, 1000003ULL + i));
    int stop = 4 + i % 25;
    while (s.turn < stop || (s.turn < kTurnsPerMatch - 2 && legal_moves(s).size() < 2))
      s.play(walker.choose(project(s, s.current)));
    states.push_back(s);
  }
  std::vector<StrategySpec> specs;
  for (int iters : iterations) {
    StrategySpec sp = spec;
    sp.search.iterations = iters;
    sp.search.validate();
    specs.push_back(sp);
  }
  // Iteration counts interleaved per state, so load drift hits every point alike.
  std::vector<std::vector<double>> secs(specs.size());
  for (int i = 0; i < samples; ++i) {
    const MatchState& s = states[i];
    for (std::size_t k = 0; k < specs.size(); ++k) {
      auto player = make_player(specs[k], mix_seed(seed, static_cast<std::uint64_t>(i) + 77));
      auto start = std::chrono::steady_clock::now();
      if (player->needs_full_state()) player->choose_full(s);
      else player->choose(project(s, s.current));
      secs[k].push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
  }
  std::vector<TimingPoint> out;
  for (std::size_t k = 0; k < specs.size(); ++k) out.push_back({iterations[k], stats::summarize(std::move(secs[k]))});
  return out;
}

}  // namespace scopone
