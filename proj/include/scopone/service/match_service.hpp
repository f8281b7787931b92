#pragma once

// Live human-vs-AI matches. One human seat, the other three seats share a
// strategy. AI moves are computed on a worker pool and published after
// max(compute time, uniform delay) so think time says nothing about the
// opponent. Each match is persisted as an append-only log in the engine log
// format; a restarted service replays the logs and carries on.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "scopone/experiments/stats.hpp"
#include "scopone/match_log.hpp"
#include "scopone/players.hpp"

namespace scopone::service {

class ServiceError : public std::runtime_error {
 public:
  enum class Kind { kBadRequest, kUnauthorized, kNotFound, kConflict, kIllegalMove };
  ServiceError(Kind kind, const std::string& what, std::vector<Move> legal = {})
      : std::runtime_error(what), kind_(kind), legal_(std::move(legal)) {}
  Kind kind() const { return kind_; }
  int http_status() const {
    switch (kind_) {
      case Kind::kBadRequest: return 400;
      case Kind::kUnauthorized: return 401;
      case Kind::kNotFound: return 404;
      case Kind::kConflict: return 409;
      case Kind::kIllegalMove: return 422;
    }
    return 500;
  }
  const std::vector<Move>& legal() const { return legal_; }

 private:
  Kind kind_;
  std::vector<Move> legal_;
};

struct RosterEntry {
  std::string label;
  std::string spec;
};

inline std::vector<RosterEntry> default_roster() {
  return {{"greedy", "greedy"},
          {"cs", "cs"},
          {"mcts(1000)", "mcts:iters=1000"},
          {"ismcts(1000)", "ismcts:iters=1000"},
          {"ismcts(4000)", "ismcts:iters=4000"}};
}

struct ServiceConfig {
  std::filesystem::path data_dir;  // empty: nothing is persisted
  std::vector<RosterEntry> roster = default_roster();
  double delay_min = 1.0;  // seconds
  double delay_max = 4.0;
  int workers = 2;
  std::uint64_t seed = std::random_device{}();
};

enum class Mode { kBlindRandom, kExplicit };
enum class Status { kAwaitingHuman, kAiThinking, kFinished };

inline const char* mode_name(Mode m) { return m == Mode::kBlindRandom ? "blind_random" : "explicit"; }
inline const char* status_name(Status s) {
  switch (s) {
    case Status::kAwaitingHuman: return "awaiting_human";
    case Status::kAiThinking: return "ai_thinking";
    case Status::kFinished: return "finished";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "blind_random") return Mode::kBlindRandom;
  if (s == "explicit") return Mode::kExplicit;
  throw ServiceError(ServiceError::Kind::kBadRequest, "invalid mode: " + s);
}

struct CreateRequest {
  Mode mode = Mode::kBlindRandom;
  std::string strategy;  // explicit mode: roster label or strategy spec
  std::optional<std::uint64_t> seed;
  int target = 0;  // 0: single match, else 11/16/21/31
};

struct Created {
  std::string id;
  std::string token;
  Seat human_seat = 0;
};

// A move record or a match result, in publication order.
struct Event {
  int index = 0;
  int match_number = 0;
  bool match_end = false;
  Seat seat = 0;
  Move move;
  bool scopa = false;
  std::array<int, 2> score{};        // match_end only
  std::array<int, 2> game_totals{};  // match_end only
  double t_ms = 0;                   // since match creation
};

// Everything the human may see.
struct ViewSnapshot {
  std::string id;
  Mode mode = Mode::kBlindRandom;
  std::string strategy;  // set in explicit mode only
  Status status = Status::kAwaitingHuman;
  int match_number = 0;
  int target = 0;
  std::array<int, 2> game_totals{};
  PlayerView view;
  std::vector<Move> legal;  // empty unless the human is to move
  int events = 0;
  std::optional<MatchScore> last_score;
};

struct StudyRecord {
  std::string id;
  int match_number = 0;
  std::string strategy;
  Mode mode = Mode::kBlindRandom;
  Seat human_seat = 0;
  int human_points = 0;
  int ai_points = 0;
  int outcome = 0;  // +1 human win, 0 tie, -1 loss
  double duration_s = 0;
};

inline const char* outcome_name(int o) { return o > 0 ? "win" : o < 0 ? "loss" : "tie"; }

struct StudyFilter {
  std::optional<std::string> strategy;
  std::optional<Mode> mode;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline std::int64_t epoch_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

inline std::string hex64(std::uint64_t x) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) s[i] = digits[x & 15];
  return s;
}

}  // namespace detail

class MatchService {
 public:
  explicit MatchService(ServiceConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    if (cfg_.roster.empty()) throw std::invalid_argument("empty roster");
    if (cfg_.delay_min < 0 || cfg_.delay_max < cfg_.delay_min) throw std::invalid_argument("bad delay window");
    for (const auto& r : cfg_.roster) parse_strategy(r.spec);
    if (!cfg_.data_dir.empty()) {
      std::filesystem::create_directories(cfg_.data_dir);
      recover();
    }
    int n = std::max(1, cfg_.workers);
    for (int i = 0; i < n; ++i) workers_.emplace_back([this] { worker_loop(); });
  }

  ~MatchService() {
    {
      std::lock_guard lock(queue_mu_);
      stopping_ = true;
    }
    queue_cv_.notify_all();
    for (auto& w : workers_) w.join();
  }

  MatchService(const MatchService&) = delete;
  MatchService& operator=(const MatchService&) = delete;

  const ServiceConfig& config() const { return cfg_; }

  Created create_match(const CreateRequest& req) {
    if (req.target != 0 && req.target != 11 && req.target != 16 && req.target != 21 && req.target != 31)
      throw ServiceError(ServiceError::Kind::kBadRequest, "target must be 0, 11, 16, 21 or 31");
    auto m = std::make_shared<LiveMatch>();
    {
      std::lock_guard lock(rng_mu_);
      m->id = detail::hex64(rng_());
      m->token = detail::hex64(rng_()) + detail::hex64(rng_());
      m->seed = req.seed ? *req.seed : rng_();
      if (req.mode == Mode::kBlindRandom) {
        const auto& entry = cfg_.roster[std::uniform_int_distribution<std::size_t>(0, cfg_.roster.size() - 1)(rng_)];
        m->label = entry.label;
        m->spec = entry.spec;
      }
      m->human_seat = static_cast<Seat>(std::uniform_int_distribution<int>(0, 3)(rng_));
      m->first_dealer = static_cast<Seat>(std::uniform_int_distribution<int>(0, 3)(rng_));
    }
    m->mode = req.mode;
    if (req.mode == Mode::kExplicit) {
      m->label = req.strategy;
      m->spec = req.strategy;
      for (const auto& r : cfg_.roster)
        if (r.label == req.strategy) m->spec = r.spec;
      try {
        parse_strategy(m->spec);
      } catch (const std::exception& e) {
        throw ServiceError(ServiceError::Kind::kBadRequest, e.what());
      }
    }
    m->target = req.target;
    m->created = detail::Clock::now();
    m->created_epoch_ms = detail::epoch_ms();
    {
      std::lock_guard lock(m->mu);
      start_match(*m, 0);
      append_index("created\t" + m->id + "\t" + std::to_string(m->created_epoch_ms));
      after_transition(m);
    }
    {
      std::unique_lock lock(map_mu_);
      matches_[m->id] = m;
    }
    return {m->id, m->token, m->human_seat};
  }

  ViewSnapshot get_view(const std::string& id, const std::string& token) const {
    auto m = find(id, token);
    std::lock_guard lock(m->mu);
    ViewSnapshot v;
    v.id = m->id;
    v.mode = m->mode;
    if (m->mode == Mode::kExplicit) v.strategy = m->label;
    v.status = m->status;
    v.match_number = m->match_number;
    v.target = m->target;
    v.game_totals = m->game_totals;
    v.view = project(m->state, m->human_seat);
    if (m->status == Status::kAwaitingHuman) v.legal = legal_moves(m->state);
    v.events = static_cast<int>(m->events.size());
    v.last_score = m->last_score;
    return v;
  }

  // Applies the human move; AI replies are published as events.
  void submit_move(const std::string& id, const std::string& token, const Move& move) {
    auto m = find(id, token);
    std::lock_guard lock(m->mu);
    if (m->status == Status::kFinished) throw ServiceError(ServiceError::Kind::kConflict, "match is finished");
    if (m->status != Status::kAwaitingHuman || m->state.current != m->human_seat)
      throw ServiceError(ServiceError::Kind::kConflict, "not the human's turn");
    if (!is_legal_move(m->state.hands[m->human_seat], m->state.table, move))
      throw ServiceError(ServiceError::Kind::kIllegalMove, "illegal move", legal_moves(m->state));
    publish_move(*m, move);
    after_transition(m);
  }

  // Events with index >= since. Blocks up to `wait` when none are ready and
  // the game is still running.
  std::vector<Event> events(const std::string& id, const std::string& token, int since,
                            std::chrono::milliseconds wait = std::chrono::milliseconds(0)) const {
    auto m = find(id, token);
    std::unique_lock lock(m->mu);
    if (wait.count() > 0)
      m->cv.wait_for(lock, wait, [&] { return static_cast<int>(m->events.size()) > since || m->status == Status::kFinished; });
    std::vector<Event> out;
    for (std::size_t i = std::max(0, since); i < m->events.size(); ++i) out.push_back(m->events[i]);
    return out;
  }

  Status status(const std::string& id, const std::string& token) const {
    auto m = find(id, token);
    std::lock_guard lock(m->mu);
    return m->status;
  }

  // Blocks until the match leaves ai_thinking or the timeout expires.
  Status wait_settled(const std::string& id, const std::string& token, std::chrono::milliseconds timeout) const {
    auto m = find(id, token);
    std::unique_lock lock(m->mu);
    m->cv.wait_for(lock, timeout, [&] { return m->status != Status::kAiThinking; });
    return m->status;
  }

  std::vector<StudyRecord> export_study(const StudyFilter& filter = {}) const {
    std::vector<std::shared_ptr<LiveMatch>> all;
    {
      std::shared_lock lock(map_mu_);
      for (const auto& [id, m] : matches_) all.push_back(m);
    }
    std::vector<StudyRecord> out;
    for (const auto& m : all) {
      std::lock_guard lock(m->mu);
      for (const auto& r : m->records) {
        if (filter.strategy && r.strategy != *filter.strategy) continue;
        if (filter.mode && r.mode != *filter.mode) continue;
        out.push_back(r);
      }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return std::tie(a.id, a.match_number) < std::tie(b.id, b.match_number); });
    return out;
  }

  std::size_t match_count() const {
    std::shared_lock lock(map_mu_);
    return matches_.size();
  }

  // Server-side truth, for tests and tooling; never served over HTTP.
  struct Internals {
    MatchState state;
    std::string strategy;
    Seat human_seat = 0;
    std::filesystem::path log_path;
  };
  Internals internals(const std::string& id) const {
    std::shared_ptr<LiveMatch> m;
    {
      std::shared_lock lock(map_mu_);
      auto it = matches_.find(id);
      if (it == matches_.end()) throw ServiceError(ServiceError::Kind::kNotFound, "unknown match");
      m = it->second;
    }
    std::lock_guard lock(m->mu);
    return {m->state, m->label, m->human_seat, log_path(m->id)};
  }

 private:
  struct LiveMatch {
    std::string id, token, label, spec;
    Mode mode = Mode::kBlindRandom;
    Seat human_seat = 0;
    Seat first_dealer = 3;
    std::uint64_t seed = 0;
    int target = 0;
    detail::Clock::time_point created;
    std::int64_t created_epoch_ms = 0;

    int match_number = 0;
    std::uint64_t match_seed = 0;
    DealResult deal;
    MatchState state;
    std::array<std::unique_ptr<Player>, kNumSeats> players;
    Status status = Status::kAwaitingHuman;
    std::array<int, 2> game_totals{};
    std::optional<MatchScore> last_score;
    detail::Clock::time_point match_started;
    detail::Clock::time_point last_publish;
    std::vector<Event> events;
    std::vector<StudyRecord> records;
    bool job_pending = false;

    mutable std::mutex mu;
    mutable std::condition_variable cv;
  };

  struct Job {
    detail::Clock::time_point not_before;
    std::uint64_t order = 0;
    std::shared_ptr<LiveMatch> match;
    std::optional<Move> publish;  // empty: compute the next AI move
    int turn = 0;
    bool operator>(const Job& o) const { return std::tie(not_before, order) > std::tie(o.not_before, o.order); }
  };

  std::shared_ptr<LiveMatch> find(const std::string& id, const std::string& token) const {
    std::shared_ptr<LiveMatch> m;
    {
      std::shared_lock lock(map_mu_);
      auto it = matches_.find(id);
      if (it == matches_.end()) throw ServiceError(ServiceError::Kind::kNotFound, "unknown match");
      m = it->second;
    }
    if (token != m->token) throw ServiceError(ServiceError::Kind::kUnauthorized, "bad token");
    return m;
  }

  std::filesystem::path log_path(const std::string& id) const {
    return cfg_.data_dir.empty() ? std::filesystem::path{} : cfg_.data_dir / (id + ".log");
  }

  void append_file(const std::string& id, const std::string& text) const {
    if (cfg_.data_dir.empty()) return;
    std::ofstream out(log_path(id), std::ios::app);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cannot write match log " + log_path(id).string());
  }

  void append_index(const std::string& line) {
    if (cfg_.data_dir.empty()) return;
    std::lock_guard lock(index_mu_);
    std::ofstream out(cfg_.data_dir / "index.tsv", std::ios::app);
    out << line << '\n';
  }

  static std::uint64_t game_match_seed(std::uint64_t seed, int number) {
    return number == 0 ? seed : CounterRng::mix(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(number));
  }

  void setup_players(LiveMatch& m) const {
    StrategySpec spec = parse_strategy(m.spec);
    for (Seat s = 0; s < kNumSeats; ++s) {
      m.players[s].reset();
      if (s != m.human_seat)
        m.players[s] = make_player(spec, CounterRng::mix(m.match_seed ^ (0x51ED27ULL + static_cast<std::uint64_t>(s))));
    }
  }

  MatchLog header_for(const LiveMatch& m) const {
    MatchLog log;
    log.meta = {{"id", m.id},
                {"token", m.token},
                {"mode", mode_name(m.mode)},
                {"strategy", m.label},
                {"spec", m.spec},
                {"human_seat", std::to_string(m.human_seat)},
                {"target", std::to_string(m.target)},
                {"match_number", std::to_string(m.match_number)},
                {"created_ms", std::to_string(m.created_epoch_ms)}};
    log.seed = m.match_seed;
    log.deal = m.deal;
    return log;
  }

  // Deals match `number` of the game; dealer rotates each match.
  void start_match(LiveMatch& m, int number, bool write = true) {
    m.match_number = number;
    m.match_seed = game_match_seed(m.seed, number);
    m.deal = deal(m.match_seed, static_cast<Seat>((m.first_dealer + number) % kNumSeats));
    m.state = MatchState::from_deal(m.deal);
    m.match_started = detail::Clock::now();
    m.last_publish = m.match_started;
    setup_players(m);
    if (write) {
      std::ostringstream os;
      write_log_header(os, header_for(m));
      append_file(m.id, os.str());
    }
  }

  double since_created_ms(const LiveMatch& m) const {
    return std::chrono::duration<double, std::milli>(detail::Clock::now() - m.created).count();
  }

  // Caller holds m.mu.
  void publish_move(LiveMatch& m, const Move& move) {
    m.state.play(move);
    const HistoryEntry& e = m.state.history().back();
    append_file(m.id, format_move_record({e.seat, e.move, e.scopa}) + "\n");
    Event ev;
    ev.index = static_cast<int>(m.events.size());
    ev.match_number = m.match_number;
    ev.seat = e.seat;
    ev.move = e.move;
    ev.scopa = e.scopa;
    ev.t_ms = since_created_ms(m);
    m.events.push_back(ev);
    m.last_publish = detail::Clock::now();
    if (m.state.is_over()) finish_match(m);
  }

  void finish_match(LiveMatch& m, bool write = true, double duration_s = -1) {
    MatchScore score = score_match(m.state);
    m.last_score = score;
    int human_team = team_of(m.human_seat);
    for (int t = 0; t < 2; ++t) m.game_totals[t] += score.team[t].total;
    if (write) append_file(m.id, format_score_record(score) + "\nend\n");

    StudyRecord r;
    r.id = m.id;
    r.match_number = m.match_number;
    r.strategy = m.label;
    r.mode = m.mode;
    r.human_seat = m.human_seat;
    r.human_points = score.team[human_team].total;
    r.ai_points = score.team[1 - human_team].total;
    r.outcome = score.winner() < 0 ? 0 : score.winner() == human_team ? 1 : -1;
    r.duration_s = duration_s >= 0 ? duration_s
                                   : std::chrono::duration<double>(detail::Clock::now() - m.match_started).count();
    m.records.push_back(r);
    if (write) {
      std::ostringstream line;
      line << "finished\t" << m.id << '\t' << m.match_number << '\t' << detail::epoch_ms() << '\t' << r.duration_s;
      append_index(line.str());
    }

    Event ev;
    ev.index = static_cast<int>(m.events.size());
    ev.match_number = m.match_number;
    ev.match_end = true;
    ev.score = score.totals();
    ev.game_totals = m.game_totals;
    ev.t_ms = since_created_ms(m);
    m.events.push_back(ev);

    if (game_continues(m)) start_match(m, m.match_number + 1, write);
  }

  static bool game_continues(const LiveMatch& m) {
    if (m.target == 0) return false;
    int hi = std::max(m.game_totals[0], m.game_totals[1]);
    return hi < m.target || m.game_totals[0] == m.game_totals[1];
  }

  bool game_over(const LiveMatch& m) const { return m.state.is_over() && !game_continues(m); }

  // Caller holds m.mu. Sets the status and queues AI work.
  void after_transition(const std::shared_ptr<LiveMatch>& m) {
    if (game_over(*m)) {
      m->status = Status::kFinished;
    } else if (m->state.current == m->human_seat) {
      m->status = Status::kAwaitingHuman;
    } else {
      m->status = Status::kAiThinking;
      if (!m->job_pending) {
        m->job_pending = true;
        push_job({detail::Clock::now(), 0, m, std::nullopt, m->state.turn});
      }
    }
    m->cv.notify_all();
  }

  void push_job(Job job) {
    {
      std::lock_guard lock(queue_mu_);
      job.order = next_order_++;
      queue_.push(std::move(job));
    }
    queue_cv_.notify_all();
  }

  double draw_delay() {
    std::lock_guard lock(rng_mu_);
    return std::uniform_real_distribution<double>(cfg_.delay_min, cfg_.delay_max)(rng_);
  }

  void worker_loop() {
    for (;;) {
      Job job;
      {
        std::unique_lock lock(queue_mu_);
        for (;;) {
          if (stopping_) return;
          if (!queue_.empty() && queue_.top().not_before <= detail::Clock::now()) break;
          if (queue_.empty()) queue_cv_.wait(lock);
          else queue_cv_.wait_until(lock, queue_.top().not_before);
        }
        job = queue_.top();
        queue_.pop();
      }
      try {
        run_job(job);
      } catch (const std::exception& e) {
        std::lock_guard lock(job.match->mu);
        job.match->job_pending = false;
        job.match->cv.notify_all();
      }
    }
  }

  void run_job(const Job& job) {
    auto& m = *job.match;
    if (job.publish) {
      std::lock_guard lock(m.mu);
      m.job_pending = false;
      if (m.state.turn != job.turn || m.state.is_over()) return;
      publish_move(m, *job.publish);
      after_transition(job.match);
      return;
    }
    MatchState snapshot;
    Player* player = nullptr;
    detail::Clock::time_point started;
    {
      std::lock_guard lock(m.mu);
      if (m.state.turn != job.turn || m.state.current == m.human_seat || m.state.is_over()) {
        m.job_pending = false;
        return;
      }
      snapshot = m.state;
      player = m.players[snapshot.current].get();
      started = m.last_publish;
    }
    // Only this job touches the player until the move is published.
    Move move = player->needs_full_state() ? player->choose_full(snapshot) : player->choose(project(snapshot, snapshot.current));
    auto compute = detail::Clock::now() - started;
    auto pad = std::chrono::duration_cast<detail::Clock::duration>(std::chrono::duration<double>(draw_delay()));
    push_job({started + std::max(compute, pad), 0, job.match, move, job.turn});
  }

  void recover() {
    for (const auto& entry : std::filesystem::directory_iterator(cfg_.data_dir)) {
      if (entry.path().extension() != ".log") continue;
      std::ifstream in(entry.path());
      std::vector<MatchLog> logs;
      try {
        logs = read_logs(in);
      } catch (const std::exception&) {
        continue;  // unreadable logs are left on disk untouched
      }
      if (logs.empty()) continue;
      auto durations = read_durations(entry.path().stem().string());
      auto m = std::make_shared<LiveMatch>();
      const MatchLog& first = logs.front();
      auto meta = [&](const char* key) {
        auto v = first.meta_value(key);
        if (!v) throw std::runtime_error(std::string("log without ") + key);
        return *v;
      };
      try {
        m->id = meta("id");
        m->token = meta("token");
        m->mode = parse_mode(meta("mode"));
        m->label = meta("strategy");
        m->spec = meta("spec");
        m->human_seat = std::stoi(meta("human_seat"));
        m->target = std::stoi(meta("target"));
        m->created_epoch_ms = std::stoll(meta("created_ms"));
        m->seed = first.seed.value_or(0);
        m->first_dealer = first.deal.dealer;
        m->created = detail::Clock::now() -
                     std::chrono::milliseconds(std::max<std::int64_t>(0, detail::epoch_ms() - m->created_epoch_ms));
        for (std::size_t k = 0; k < logs.size(); ++k) {
          start_match(*m, static_cast<int>(k), false);
          if (logs[k].deal != m->deal) throw std::runtime_error("deal does not match seed");
          for (const auto& lm : logs[k].moves) {
            if (lm.seat != m->state.current || !is_legal_move(m->state.hands[lm.seat], m->state.table, lm.move))
              throw std::runtime_error("illegal move in log");
            m->state.play(lm.move);
            Event ev;
            ev.index = static_cast<int>(m->events.size());
            ev.match_number = m->match_number;
            ev.seat = lm.seat;
            ev.move = lm.move;
            ev.scopa = m->state.history().back().scopa;
            m->events.push_back(ev);
          }
          if (m->state.is_over()) {
            if (!logs[k].score) {
              // Crashed between the last move and the score record.
              append_file(m->id, format_score_record(score_match(m->state)) + "\nend\n");
            }
            auto d = durations.find(static_cast<int>(k));
            bool last = k + 1 == logs.size();
            finish_match(*m, false, d == durations.end() ? 0.0 : d->second);
            if (last && game_continues(*m)) {
              std::ostringstream os;
              write_log_header(os, header_for(*m));
              append_file(m->id, os.str());
            }
          }
        }
      } catch (const std::exception&) {
        continue;
      }
      std::lock_guard lock(m->mu);
      after_transition(m);
      std::unique_lock map_lock(map_mu_);
      matches_[m->id] = m;
    }
  }

  std::map<int, double> read_durations(const std::string& id) const {
    std::map<int, double> out;
    std::ifstream in(cfg_.data_dir / "index.tsv");
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream fields(line);
      std::string kind, mid;
      int number = 0;
      std::int64_t at = 0;
      double duration = 0;
      std::getline(fields, kind, '\t');
      std::getline(fields, mid, '\t');
      if (kind != "finished" || mid != id) continue;
      if (fields >> number >> at >> duration) out[number] = duration;
    }
    return out;
  }

  ServiceConfig cfg_;
  mutable std::mutex rng_mu_;
  std::mt19937_64 rng_;
  mutable std::shared_mutex map_mu_;
  std::map<std::string, std::shared_ptr<LiveMatch>> matches_;
  std::mutex index_mu_;

  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::priority_queue<Job, std::vector<Job>, std::greater<>> queue_;
  std::uint64_t next_order_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

// Human wins, losses and ties per strategy.
struct StudyRow {
  std::string strategy;
  int matches = 0;
  int wins = 0, losses = 0, ties = 0;
};

inline std::vector<StudyRow> aggregate_study(const std::vector<StudyRecord>& records,
                                             const std::vector<RosterEntry>& roster = default_roster()) {
  std::vector<StudyRow> rows;
  for (const auto& r : roster) rows.push_back({r.label});
  for (const auto& rec : records) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const StudyRow& row) { return row.strategy == rec.strategy; });
    if (it == rows.end()) it = rows.insert(rows.end(), StudyRow{rec.strategy});
    ++it->matches;
    (rec.outcome > 0 ? it->wins : rec.outcome < 0 ? it->losses : it->ties) += 1;
  }
  std::erase_if(rows, [](const StudyRow& r) { return r.matches == 0; });
  return rows;
}

inline std::string study_csv(const std::vector<StudyRecord>& records) {
  std::ostringstream os;
  os << "match_id,match_number,strategy,mode,human_seat,human_points,ai_points,outcome,duration_s\n";
  for (const auto& r : records)
    os << r.id << ',' << r.match_number << ',' << r.strategy << ',' << mode_name(r.mode) << ',' << r.human_seat << ','
       << r.human_points << ',' << r.ai_points << ',' << outcome_name(r.outcome) << ',' << r.duration_s << '\n';
  return os.str();
}

inline std::string study_aggregate_csv(const std::vector<StudyRow>& rows) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << "strategy,matches,win_pct,win_low,win_high,loss_pct,loss_low,loss_high,tie_pct,tie_low,tie_high\n";
  for (const auto& r : rows) {
    os << r.strategy << ',' << r.matches;
    for (int k : {r.wins, r.losses, r.ties}) {
      auto ci = stats::wald_interval(k, r.matches);
      os << ',' << 100.0 * k / r.matches << ',' << 100 * ci.low << ',' << 100 * ci.high;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace scopone::service
