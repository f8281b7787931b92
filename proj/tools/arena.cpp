// arena: tournaments, sweeps, timing and single matches.
//
//   arena run --plan plan.txt --out results/
//   arena sweep --axis epsilon --values 0,0.1,0.3 --subject mcts --baseline "mcts:sim=rs" --decks 200
//   arena timing --strategy ismcts --iters 1000,2000,4000 --samples 200
//   arena match --hand greedy --deck cs --seed 7
//   arena replay results/logs/cell0.log

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>

#include "CLI11.hpp"
#include "scopone/experiments/report.hpp"

namespace fs = std::filesystem;
using namespace scopone;

namespace {

std::string cell_file(const Pairing& p) {
  std::string s = p.hand + "__vs__" + p.deck;
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
  return s + ".log";
}

void progress_line(int done, int total) {
  if (done == total || done % std::max(1, total / 100) == 0)
    std::cerr << "\r" << done << "/" << total << (done == total ? "\n" : "") << std::flush;
}

int run_cmd(const std::string& plan_path, std::string out_dir, int threads_override, int decks_override, bool quiet) {
  std::ifstream in(plan_path);
  if (!in) throw std::runtime_error("cannot open plan " + plan_path);
  ExperimentPlan plan = parse_plan(in);
  if (!out_dir.empty()) plan.out_dir = out_dir;
  if (threads_override > 0) plan.threads = threads_override;
  if (decks_override >= 0) plan.deck_count = decks_override;
  if (plan.out_dir.empty()) plan.out_dir = "results";
  fs::create_directories(plan.out_dir);

  std::map<std::string, std::unique_ptr<std::ofstream>> logs;
  std::function<void(const Pairing&, const MatchResult&)> on_match;
  if (plan.write_logs) {
    fs::create_directories(fs::path(plan.out_dir) / "logs");
    on_match = [&](const Pairing& p, const MatchResult& r) {
      auto& f = logs[cell_file(p)];
      if (!f) f = std::make_unique<std::ofstream>(fs::path(plan.out_dir) / "logs" / cell_file(p));
      write_log(*f, r.log);
    };
  }
  ResultTable t = run_plan(plan, quiet ? ProgressFn{} : ProgressFn(progress_line), on_match);
  {
    std::ofstream csv(fs::path(plan.out_dir) / "results.csv");
    write_results_csv(csv, t, plan.wilson);
  }
  std::ofstream summary(fs::path(plan.out_dir) / "summary.txt");
  write_summary(summary, t, plan.wilson);
  write_summary(std::cout, t, plan.wilson);
  return t.errors.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scopone experiment harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a tournament plan");
  std::string plan_path, out_dir;
  int threads = 0, decks = -1;
  bool quiet = false;
  run->add_option("--plan", plan_path, "plan file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "worker threads (overrides the plan)");
  run->add_option("--decks", decks, "deck count (overrides the plan)");
  run->add_flag("--quiet", quiet, "no progress output");

  auto* sw = app.add_subcommand("sweep", "vary one search parameter against a fixed baseline");
  std::string axis, values, subject = "mcts", baseline = "greedy", sweep_out;
  int sweep_decks = 200, sweep_repeats = 1, sweep_threads = 1;
  std::uint64_t sweep_seed = 1;
  sw->add_option("--axis", axis, "uct_c|reward|sim|epsilon|iterations|determinizator")->required();
  sw->add_option("--values", values, "comma separated values")->required();
  sw->add_option("--subject", subject, "strategy being varied");
  sw->add_option("--baseline", baseline, "fixed opponent");
  sw->add_option("--decks", sweep_decks);
  sw->add_option("--repeats", sweep_repeats);
  sw->add_option("--threads", sweep_threads);
  sw->add_option("--deck-seed", sweep_seed);
  sw->add_option("--out", sweep_out, "CSV file (default stdout)");

  auto* tm = app.add_subcommand("timing", "per-move time against iteration count");
  std::string timing_strategy = "mcts", iters_list = "1000,2000,4000";
  int samples = 1000;
  std::uint64_t timing_seed = 1;
  tm->add_option("--strategy", timing_strategy);
  tm->add_option("--iters", iters_list, "comma separated iteration counts");
  tm->add_option("--samples", samples);
  tm->add_option("--seed", timing_seed);

  auto* mt = app.add_subcommand("match", "play one match and print its log");
  std::string hand = "greedy", deck = "greedy";
  std::uint64_t match_deal_seed = 0, player_seed = 0;
  mt->add_option("--hand", hand);
  mt->add_option("--deck", deck);
  mt->add_option("--seed", match_deal_seed, "deal seed");
  mt->add_option("--player-seed", player_seed);

  auto* rp = app.add_subcommand("replay", "check logs against the engine and print outcomes");
  std::string replay_path;
  rp->add_option("file", replay_path)->required()->check(CLI::ExistingFile);

  auto* dl = app.add_subcommand("deal", "print a deal");
  std::uint64_t deal_seed = 0;
  int dealer = 3;
  dl->add_option("--seed", deal_seed);
  dl->add_option("--dealer", dealer)->check(CLI::Range(0, 3));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_cmd(plan_path, out_dir, threads, decks, quiet);

    if (*sw) {
      ExperimentPlan plan;
      plan.deck_count = sweep_decks;
      plan.deck_seed = sweep_seed;
      plan.repeats = sweep_repeats;
      plan.threads = sweep_threads;
      auto pts = sweep(parse_axis(axis), detail::split_list(values), parse_strategy(subject), parse_strategy(baseline),
                       plan, progress_line);
      if (sweep_out.empty()) {
        write_sweep_csv(std::cout, axis, pts);
      } else {
        std::ofstream f(sweep_out);
        write_sweep_csv(f, axis, pts);
      }
      return 0;
    }

    if (*tm) {
      std::vector<int> iters;
      for (const auto& v : detail::split_list(iters_list)) iters.push_back(std::stoi(v));
      write_timing_csv(std::cout, measure_timing(parse_strategy(timing_strategy), iters, samples, timing_seed));
      return 0;
    }

    if (*mt) {
      MatchResult r = run_match(deal(match_deal_seed), parse_strategy(hand), parse_strategy(deck), player_seed);
      r.log.seed = match_deal_seed;
      write_log(std::cout, r.log);
      return 0;
    }

    if (*rp) {
      std::ifstream in(replay_path);
      int n = 0, hand_wins = 0, deck_wins = 0, ties = 0;
      while (auto log = read_log(in)) {
        MatchState s = replay(*log);
        ++n;
        if (!s.is_over()) continue;
        int w = score_match(s).winner();
        if (w < 0) ++ties;
        else if (w == hand_team(log->deal.dealer)) ++hand_wins;
        else ++deck_wins;
      }
      std::cout << n << " logs replayed: hand " << hand_wins << ", deck " << deck_wins << ", ties " << ties << '\n';
      return 0;
    }

    if (*dl) {
      DealResult d = deal(deal_seed, dealer);
      for (int s = 0; s < kNumSeats; ++s) std::cout << "hand " << s << ": " << d.hands[s].str() << '\n';
      std::cout << "table: " << d.table.str() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "arena: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
