#pragma once

// Player interface and the strategy spec language shared by the experiment
// CLI and the service:
//
//   random | greedy | cs | cg
//   mcts:iters=1000,c=2.0,reward=sd,sim=egs(0.3),seed=7
//   ismcts:iters=4000,c=2.0,reward=sd,sim=egs(0.3),det=cgs,seed=7

#include <cstdint>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "scopone/rules.hpp"
#include "scopone/search/ismcts.hpp"
#include "scopone/search/mcts.hpp"

namespace scopone {

enum class StrategyKind { kRandom, kGreedy, kCs, kCg, kMcts, kIsmcts };

struct StrategySpec {
  StrategyKind kind = StrategyKind::kGreedy;
  SearchConfig search;
  DeterminizerKind det = DeterminizerKind::kRandom;
  bool seed_given = false;

  bool is_search() const { return kind == StrategyKind::kMcts || kind == StrategyKind::kIsmcts; }
  bool stochastic() const { return is_search() || kind == StrategyKind::kRandom; }

  // Canonical text; round-trips through parse_strategy.
  std::string str() const {
    switch (kind) {
      case StrategyKind::kRandom: return "random";
      case StrategyKind::kGreedy: return "greedy";
      case StrategyKind::kCs: return "cs";
      case StrategyKind::kCg: return "cg";
      case StrategyKind::kMcts:
      case StrategyKind::kIsmcts: break;
    }
    std::ostringstream os;
    os << (kind == StrategyKind::kMcts ? "mcts" : "ismcts") << ":iters=" << search.iterations << ",c=" << search.uct_c
       << ",reward=" << reward_name(search.reward) << ",sim=" << sim_name(search.sim);
    if (kind == StrategyKind::kIsmcts) os << ",det=" << (det == DeterminizerKind::kRandom ? "random" : "cgs");
    if (seed_given) os << ",seed=" << search.seed;
    return os.str();
  }
};

inline StrategySpec parse_strategy(const std::string& text) {
  StrategySpec spec;
  auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  if (name == "random") spec.kind = StrategyKind::kRandom;
  else if (name == "greedy") spec.kind = StrategyKind::kGreedy;
  else if (name == "cs") spec.kind = StrategyKind::kCs;
  else if (name == "cg") spec.kind = StrategyKind::kCg;
  else if (name == "mcts") spec.kind = StrategyKind::kMcts;
  else if (name == "ismcts") spec.kind = StrategyKind::kIsmcts;
  else throw std::invalid_argument("unknown strategy: " + name);
  if (colon == std::string::npos) return spec;
  if (!spec.is_search()) throw std::invalid_argument("strategy takes no parameters: " + name);

  // Split on commas outside parentheses.
  std::string params = text.substr(colon + 1);
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= params.size(); ++i) {
    if (i < params.size() && params[i] == '(') ++depth;
    if (i < params.size() && params[i] == ')') --depth;
    if (i < params.size() && (params[i] != ',' || depth > 0)) continue;
    std::string kv = params.substr(start, i - start);
    start = i + 1;
    if (kv.empty()) continue;
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value: " + kv);
    std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
    if (k == "iters") spec.search.iterations = std::stoi(v);
    else if (k == "c") spec.search.uct_c = std::stod(v);
    else if (k == "reward") spec.search.reward = parse_reward(v);
    else if (k == "sim") spec.search.sim = parse_sim(v);
    else if (k == "seed") spec.search.seed = std::stoull(v), spec.seed_given = true;
    else if (k == "det" && spec.kind == StrategyKind::kIsmcts) {
      if (v == "random") spec.det = DeterminizerKind::kRandom;
      else if (v == "cgs") spec.det = DeterminizerKind::kCardGuessing;
      else throw std::invalid_argument("unknown determinizer: " + v);
    } else {
      throw std::invalid_argument("unknown parameter: " + k);
    }
  }
  spec.search.validate();
  return spec;
}

class Player {
 public:
  virtual ~Player() = default;
  // Cheating players receive the complete state; all others only a view.
  virtual bool needs_full_state() const { return false; }
  virtual Move choose(const PlayerView& view) = 0;
  virtual Move choose_full(const MatchState& state) { return choose(project(state, state.current)); }
};

class RandomPlayer : public Player {
 public:
  explicit RandomPlayer(std::uint64_t seed) : rng_(seed) {}
  Move choose(const PlayerView& view) override {
    generate_moves(view.hand, view.table, moves_);
    return moves_[std::uniform_int_distribution<std::size_t>(0, moves_.size() - 1)(rng_)];
  }

 private:
  SearchRng rng_;
  std::vector<Move> moves_;
};

class GreedyPlayer : public Player {
 public:
  Move choose(const PlayerView& view) override { return greedy_choose(view); }
};

class RuleSetPlayer : public Player {
 public:
  RuleSetPlayer(bool cg, GuessOptions options = {}) : cg_(cg), options_(options) {}
  Move choose(const PlayerView& view) override {
    GuessState gs = guess_from_history(view, options_);
    return cg_ ? cg_choose(view, gs) : cs_choose(view, gs);
  }

 private:
  bool cg_;
  GuessOptions options_;
};

// Per-decision seeds are derived from the player seed and the turn, so a
// match is reproducible no matter which decisions were skipped.
inline std::uint64_t decision_seed(std::uint64_t seed, int turn) {
  return CounterRng::mix(seed ^ CounterRng::mix(static_cast<std::uint64_t>(turn) + 0x7F4A7C15ULL));
}

class MctsPlayer : public Player {
 public:
  explicit MctsPlayer(SearchConfig cfg) : cfg_(cfg) {}
  bool needs_full_state() const override { return true; }
  Move choose(const PlayerView&) override { throw std::logic_error("mcts needs the full state"); }
  Move choose_full(const MatchState& state) override {
    SearchConfig c = cfg_;
    c.seed = decision_seed(cfg_.seed, state.turn);
    return mcts_choose(state, c);
  }

 private:
  SearchConfig cfg_;
};

class IsmctsPlayer : public Player {
 public:
  IsmctsPlayer(SearchConfig cfg, DeterminizerKind det) : cfg_(cfg), det_(det) {}
  Move choose(const PlayerView& view) override {
    SearchConfig c = cfg_;
    c.seed = decision_seed(cfg_.seed, view.turn);
    return ismcts_choose(view, c, det_);
  }

 private:
  SearchConfig cfg_;
  DeterminizerKind det_;
};

// Builds a player; `seed` is used unless the spec fixes its own.
inline std::unique_ptr<Player> make_player(const StrategySpec& spec, std::uint64_t seed) {
  SearchConfig cfg = spec.search;
  if (!spec.seed_given) cfg.seed = seed;
  switch (spec.kind) {
    case StrategyKind::kRandom: return std::make_unique<RandomPlayer>(cfg.seed);
    case StrategyKind::kGreedy: return std::make_unique<GreedyPlayer>();
    case StrategyKind::kCs: return std::make_unique<RuleSetPlayer>(false);
    case StrategyKind::kCg: return std::make_unique<RuleSetPlayer>(true);
    case StrategyKind::kMcts: return std::make_unique<MctsPlayer>(cfg);
    case StrategyKind::kIsmcts: return std::make_unique<IsmctsPlayer>(cfg, spec.det);
  }
  throw std::logic_error("unreachable");
}

inline std::unique_ptr<Player> make_player(const std::string& spec, std::uint64_t seed) {
  return make_player(parse_strategy(spec), seed);
}

}  // namespace scopone
