#pragma once

// Line-oriented match log:
//
//   scopone-log 1
//   meta <key>=<value>            (zero or more, free-form)
//   deal seed=<u64> dealer=<seat> (seed is optional)
//   hand <seat> <cards...>        (x4)
//   table <cards...>
//   move <seat> <played> [<captured...>] [scopa]   (up to 36)
//   score <team0> <team1> scope=a,b cards=a,b coins=a,b settebello=a,b primiera=a,b
//   end

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "scopone/engine.hpp"

namespace scopone {

struct LoggedMove {
  Seat seat = 0;
  Move move;
  bool scopa = false;
  bool operator==(const LoggedMove&) const = default;
};

struct MatchLog {
  std::vector<std::pair<std::string, std::string>> meta;
  std::optional<std::uint64_t> seed;
  DealResult deal;
  std::vector<LoggedMove> moves;
  std::optional<MatchScore> score;

  std::optional<std::string> meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta)
      if (k == key) return v;
    return std::nullopt;
  }
  bool operator==(const MatchLog&) const = default;
};

class LogFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_move_record(const LoggedMove& m) {
  std::string out = "move " + std::to_string(m.seat) + " " + m.move.played.str() + " [" + m.move.captured.str() + "]";
  if (m.scopa) out += " scopa";
  return out;
}

inline std::string format_score_record(const MatchScore& s) {
  const auto& a = s.team[0];
  const auto& b = s.team[1];
  std::ostringstream os;
  os << "score " << a.total << ' ' << b.total << " scope=" << a.scopa << ',' << b.scopa << " cards=" << a.cards << ','
     << b.cards << " coins=" << a.coins << ',' << b.coins << " settebello=" << a.settebello << ',' << b.settebello
     << " primiera=" << a.primiera << ',' << b.primiera;
  return os.str();
}

inline void write_log_header(std::ostream& os, const MatchLog& log) {
  os << "scopone-log 1\n";
  for (const auto& [k, v] : log.meta) os << "meta " << k << '=' << v << '\n';
  os << "deal";
  if (log.seed) os << " seed=" << *log.seed;
  os << " dealer=" << log.deal.dealer << '\n';
  for (int s = 0; s < kNumSeats; ++s) os << "hand " << s << ' ' << log.deal.hands[s].str() << '\n';
  os << "table " << log.deal.table.str() << '\n';
}

inline void write_log(std::ostream& os, const MatchLog& log) {
  write_log_header(os, log);
  for (const auto& m : log.moves) os << format_move_record(m) << '\n';
  if (log.score) os << format_score_record(*log.score) << '\n';
  os << "end\n";
}

namespace detail {

inline LoggedMove parse_move_record(const std::string& rest) {
  LoggedMove m;
  auto open = rest.find('[');
  auto close = rest.find(']');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw LogFormatError("bad move record: " + rest);
  std::istringstream head(rest.substr(0, open));
  std::string played;
  if (!(head >> m.seat >> played)) throw LogFormatError("bad move record: " + rest);
  m.move.played = card_from_string(played);
  m.move.captured = parse_card_set(rest.substr(open + 1, close - open - 1));
  std::istringstream tail(rest.substr(close + 1));
  std::string flag;
  if (tail >> flag) {
    if (flag != "scopa") throw LogFormatError("bad move flag: " + flag);
    m.scopa = true;
  }
  return m;
}

}  // namespace detail

// Reads one log; returns nullopt at end of stream.
inline std::optional<MatchLog> read_log(std::istream& is) {
  std::string line;
  bool started = false;
  MatchLog log;
  int hands_seen = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto sp = line.find(' ');
    std::string tag = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (!started) {
      if (tag != "scopone-log") throw LogFormatError("expected log header, got: " + line);
      started = true;
      continue;
    }
    if (tag == "meta") {
      auto eq = rest.find('=');
      if (eq == std::string::npos) throw LogFormatError("bad meta record: " + line);
      log.meta.emplace_back(rest.substr(0, eq), rest.substr(eq + 1));
    } else if (tag == "deal") {
      std::istringstream fields(rest);
      std::string kv;
      while (fields >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw LogFormatError("bad deal record: " + line);
        std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
        if (k == "seed") log.seed = std::stoull(v);
        else if (k == "dealer") log.deal.dealer = std::stoi(v);
      }
    } else if (tag == "hand") {
      auto sp2 = rest.find(' ');
      Seat s = std::stoi(rest.substr(0, sp2));
      check_seat(s);
      log.deal.hands[s] = parse_card_set(sp2 == std::string::npos ? "" : rest.substr(sp2 + 1));
      ++hands_seen;
    } else if (tag == "table") {
      log.deal.table = parse_card_set(rest);
    } else if (tag == "move") {
      log.moves.push_back(detail::parse_move_record(rest));
    } else if (tag == "score") {
      // The breakdown is recomputed on replay; only totals are kept here.
      std::istringstream fields(rest);
      MatchScore s;
      fields >> s.team[0].total >> s.team[1].total;
      log.score = s;
    } else if (tag == "end") {
      if (hands_seen != kNumSeats) throw LogFormatError("log without four hands");
      return log;
    } else {
      throw LogFormatError("unknown record: " + line);
    }
  }
  if (started) {
    if (hands_seen != kNumSeats) throw LogFormatError("truncated log");
    return log;  // unterminated logs are valid for matches still in progress
  }
  return std::nullopt;
}

inline std::vector<MatchLog> read_logs(std::istream& is) {
  std::vector<MatchLog> out;
  while (auto log = read_log(is)) out.push_back(std::move(*log));
  return out;
}

// Replays a log through the engine. Throws if any recorded move is illegal,
// out of turn, or its scopa flag disagrees with the engine.
inline MatchState replay(const MatchLog& log) {
  MatchState s = MatchState::from_deal(log.deal);
  for (const auto& m : log.moves) {
    if (m.seat != s.current) throw LogFormatError("move out of turn at turn " + std::to_string(s.turn));
    s = apply_move(s, m.move);
    if (s.history().back().scopa != m.scopa) throw LogFormatError("scopa flag mismatch at turn " + std::to_string(s.turn));
  }
  if (log.score && s.is_over()) {
    auto totals = score_match(s).totals();
    if (totals != log.score->totals()) throw LogFormatError("recorded score does not match replay");
  }
  return s;
}

inline MatchLog make_log(const DealResult& deal, const MatchState& final_state, std::optional<std::uint64_t> seed = {}) {
  MatchLog log;
  log.seed = seed;
  log.deal = deal;
  for (const auto& e : final_state.history()) log.moves.push_back({e.seat, e.move, e.scopa});
  if (final_state.is_over()) log.score = score_match(final_state);
  return log;
}

}  // namespace scopone
