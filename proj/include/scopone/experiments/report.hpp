#pragma once

// Plan files and result output for the arena CLI.
//
// Plan syntax (one setting per line, # comments):
//
//   deck_count = 200
//   deck_seed = 1
//   repeats = 10
//   symmetric = true
//   threads = 4
//   write_logs = true
//   ci = wald              # or wilson
//   [strategies]
//   greedy = greedy
//   mcts = "mcts:iters=1000,sim=egs(0.3)"
//   [pairings]
//   pairing = mcts vs greedy
//   round_robin = greedy, mcts

#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "scopone/experiments/tournament.hpp"

namespace scopone {

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string unquote(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) return s.substr(1, s.size() - 2);
  return s;
}

inline bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected a boolean: " + v);
}

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

}  // namespace detail

inline ExperimentPlan parse_plan(std::istream& in) {
  ExperimentPlan plan;
  std::string line, section;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("plan line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    // Comments: '#' outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("bad section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "strategies" && section != "pairings") fail("unknown section " + section);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::unquote(line.substr(eq + 1));
    try {
      if (section == "strategies") {
        for (const auto& [n, s] : plan.strategies)
          if (n == key) fail("duplicate strategy " + key);
        plan.strategies.emplace_back(key, parse_strategy(value));
      } else if (section == "pairings") {
        if (key == "pairing") {
          auto vs = value.find(" vs ");
          if (vs == std::string::npos) fail("pairing must read '<hand> vs <deck>'");
          plan.pairings.push_back({detail::trim(value.substr(0, vs)), detail::trim(value.substr(vs + 4))});
        } else if (key == "round_robin") {
          auto names = detail::split_list(value);
          for (const auto& a : names)
            for (const auto& b : names) plan.pairings.push_back({a, b});
        } else {
          fail("unknown pairing key " + key);
        }
      } else if (key == "deck_count") plan.deck_count = std::stoi(value);
      else if (key == "deck_seed") plan.deck_seed = std::stoull(value);
      else if (key == "repeats") plan.repeats = std::stoi(value);
      else if (key == "symmetric") plan.symmetric = detail::parse_bool(value);
      else if (key == "threads") plan.threads = std::stoi(value);
      else if (key == "write_logs") plan.write_logs = detail::parse_bool(value);
      else if (key == "out") plan.out_dir = value;
      else if (key == "ci") {
        if (value != "wald" && value != "wilson") fail("ci must be wald or wilson");
        plan.wilson = value == "wilson";
      } else fail("unknown key " + key);
    } catch (const std::invalid_argument& e) {
      std::string what = e.what();
      if (what.rfind("plan line", 0) == 0) throw;
      fail(what);
    }
  }
  if (plan.deck_count < 0) throw std::invalid_argument("deck_count must be >= 0");
  for (const auto& p : plan.pairings) {
    plan.strategy(p.hand);
    plan.strategy(p.deck);
  }
  return plan;
}

inline stats::Interval rate_interval(int k, int n, bool wilson) {
  return wilson ? stats::wilson_interval(k, n) : stats::wald_interval(k, n);
}

inline void write_results_csv(std::ostream& os, const ResultTable& t, bool wilson = false) {
  os << "hand,deck,matches,wins,losses,ties,win_rate,win_low,win_high,loss_rate,loss_low,loss_high,tie_rate,"
        "mean_hand_points,mean_deck_points,hand_move_mean_s,hand_move_median_s,deck_move_mean_s,deck_move_median_s\n";
  os << std::setprecision(6);
  for (const auto& c : t.cells) {
    int n = c.total();
    auto w = rate_interval(c.wins, n, wilson), l = rate_interval(c.losses, n, wilson);
    auto hs = stats::summarize(c.hand_seconds), ds = stats::summarize(c.deck_seconds);
    os << c.hand << ',' << c.deck << ',' << n << ',' << c.wins << ',' << c.losses << ',' << c.ties << ','
       << c.win_rate() << ',' << w.low << ',' << w.high << ',' << c.loss_rate() << ',' << l.low << ',' << l.high << ','
       << c.tie_rate() << ',' << (n ? double(c.hand_points) / n : 0) << ',' << (n ? double(c.deck_points) / n : 0)
       << ',' << hs.mean << ',' << hs.median << ',' << ds.mean << ',' << ds.median << '\n';
  }
}

inline std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100 * x);
  return buf;
}

// Hand-team win rates with hand strategies as rows and deck strategies as
// columns, followed by per-cell detail.
inline void write_summary(std::ostream& os, const ResultTable& t, bool wilson = false) {
  std::vector<std::string> rows, cols;
  for (const auto& c : t.cells) {
    if (std::find(rows.begin(), rows.end(), c.hand) == rows.end()) rows.push_back(c.hand);
    if (std::find(cols.begin(), cols.end(), c.deck) == cols.end()) cols.push_back(c.deck);
  }
  std::size_t width = 24;
  for (const auto& s : rows) width = std::max(width, s.size() + 2);
  os << "Hand-team win rate (rows: hand team, columns: deck team)\n\n";
  os << std::left << std::setw(static_cast<int>(width)) << "";
  for (const auto& c : cols) os << std::setw(static_cast<int>(std::max<std::size_t>(22, c.size() + 2))) << c;
  os << '\n';
  for (const auto& r : rows) {
    os << std::setw(static_cast<int>(width)) << r;
    for (const auto& c : cols) {
      std::string cell = "-";
      if (const CellResult* x = t.find(r, c)) {
        auto ci = rate_interval(x->wins, x->total(), wilson);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.1f [%.1f-%.1f]", 100 * x->win_rate(), 100 * ci.low, 100 * ci.high);
        cell = buf;
      }
      os << std::setw(static_cast<int>(std::max<std::size_t>(22, c.size() + 2))) << cell;
    }
    os << '\n';
  }
  os << "\nDetail\n\n";
  for (const auto& c : t.cells) {
    int n = c.total();
    os << c.hand << " (hand) vs " << c.deck << " (deck): " << n << " matches, hand " << percent(c.win_rate())
       << ", deck " << percent(c.loss_rate()) << ", ties " << percent(c.tie_rate());
    if (!c.hand_seconds.empty() || !c.deck_seconds.empty()) {
      auto hs = stats::summarize(c.hand_seconds), ds = stats::summarize(c.deck_seconds);
      char buf[128];
      std::snprintf(buf, sizeof buf, "; move time mean/median hand %.4f/%.4f s, deck %.4f/%.4f s", hs.mean, hs.median,
                    ds.mean, ds.median);
      os << buf;
    }
    os << '\n';
  }
  if (!t.errors.empty()) {
    os << "\nErrors (" << t.errors.size() << ")\n";
    for (const auto& e : t.errors) os << "  " << e << '\n';
  }
}

inline void write_sweep_csv(std::ostream& os, const std::string& axis, const std::vector<SweepPoint>& points) {
  os << "axis,value,role,matches,win_rate,std_error,tie_rate\n";
  os << std::setprecision(6);
  for (const auto& p : points) {
    const CellResult& h = p.subject_hand;
    const CellResult& d = p.subject_deck;
    os << axis << ',' << p.value << ",hand," << h.total() << ',' << h.win_rate() << ','
       << stats::standard_error(h.wins, h.total()) << ',' << h.tie_rate() << '\n';
    // As deck team the subject wins when the hand team loses.
    os << axis << ',' << p.value << ",deck," << d.total() << ',' << d.loss_rate() << ','
       << stats::standard_error(d.losses, d.total()) << ',' << d.tie_rate() << '\n';
  }
}

inline void write_timing_csv(std::ostream& os, const std::vector<TimingPoint>& points) {
  os << "iterations,samples,mean_s,median_s,std_error_s\n";
  os << std::setprecision(6);
  for (const auto& p : points)
    os << p.iterations << ',' << p.seconds.n << ',' << p.seconds.mean << ',' << p.seconds.median << ','
       << p.seconds.std_error << '\n';
}

}  // namespace scopone
