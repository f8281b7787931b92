#pragma once

// JSON over HTTP for MatchService. Schemas are in docs/api.md.

#include <chrono>
#include <string>

#include "httplib.h"
#include "json.hpp"
#include "scopone/service/match_service.hpp"

namespace scopone::service {

using nlohmann::json;

inline constexpr int kApiVersion = 1;

inline json cards_json(CardSet s) {
  json a = json::array();
  for (Card c : s) a.push_back(c.str());
  return a;
}

inline json move_json(const Move& m) { return {{"card", m.played.str()}, {"captured", cards_json(m.captured)}}; }

inline Move move_from_json(const json& j) {
  try {
    Move m;
    m.played = card_from_string(j.at("card").get<std::string>());
    for (const auto& c : j.value("captured", json::array())) {
      Card card = card_from_string(c.get<std::string>());
      if (m.captured.contains(card)) throw std::invalid_argument("duplicate card");
      m.captured.insert(card);
    }
    return m;
  } catch (const std::exception& e) {
    throw ServiceError(ServiceError::Kind::kBadRequest, std::string("bad move: ") + e.what());
  }
}

inline json event_json(const Event& e) {
  json j = {{"index", e.index}, {"match_number", e.match_number}, {"t_ms", static_cast<std::int64_t>(e.t_ms)}};
  if (e.match_end) {
    j["type"] = "match_end";
    j["score"] = e.score;
    j["game_totals"] = e.game_totals;
  } else {
    j["type"] = "move";
    j["seat"] = e.seat;
    j["card"] = e.move.played.str();
    j["captured"] = cards_json(e.move.captured);
    j["scopa"] = e.scopa;
  }
  return j;
}

inline json view_json(const ViewSnapshot& s) {
  const PlayerView& v = s.view;
  json history = json::array();
  for (const auto& h : v.history)
    history.push_back({{"seat", h.seat},
                       {"card", h.move.played.str()},
                       {"captured", cards_json(h.move.captured)},
                       {"scopa", h.scopa}});
  json legal = json::array();
  json options = json::object();
  for (const auto& m : s.legal) {
    legal.push_back(move_json(m));
    options[m.played.str()].push_back(cards_json(m.captured));
  }
  json j = {{"version", kApiVersion},
            {"match_id", s.id},
            {"mode", mode_name(s.mode)},
            {"status", status_name(s.status)},
            {"match_number", s.match_number},
            {"target", s.target},
            {"game_totals", s.game_totals},
            {"seat", v.seat},
            {"dealer", v.dealer},
            {"current", v.current},
            {"turn", v.turn},
            {"hand", cards_json(v.hand)},
            {"table", cards_json(v.table)},
            {"piles", {cards_json(v.piles[0]), cards_json(v.piles[1])}},
            {"scopa_count", v.scopa_count},
            {"hand_sizes", v.hand_sizes},
            {"history", history},
            {"legal_moves", legal},
            {"capture_options", options},
            {"events", s.events}};
  if (s.mode == Mode::kExplicit) j["strategy"] = s.strategy;
  if (s.last_score) j["last_score"] = s.last_score->totals();
  return j;
}

namespace detail {

inline void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, const ServiceError& e) {
  json body = {{"version", kApiVersion}, {"error", e.what()}, {"status", e.http_status()}};
  if (!e.legal().empty()) {
    body["legal_moves"] = json::array();
    for (const auto& m : e.legal()) body["legal_moves"].push_back(move_json(m));
  }
  send_json(res, e.http_status(), body);
}

inline std::string bearer(const httplib::Request& req) {
  std::string h = req.get_header_value("Authorization");
  if (h.rfind("Bearer ", 0) == 0) return h.substr(7);
  // EventSource cannot set headers.
  if (req.has_param("token")) return req.get_param_value("token");
  throw ServiceError(ServiceError::Kind::kUnauthorized, "missing bearer token");
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e);
    } catch (const json::exception& e) {
      send_error(res, ServiceError(ServiceError::Kind::kBadRequest, e.what()));
    } catch (const std::invalid_argument& e) {
      send_error(res, ServiceError(ServiceError::Kind::kBadRequest, e.what()));
    } catch (const std::out_of_range& e) {
      send_error(res, ServiceError(ServiceError::Kind::kBadRequest, e.what()));
    }
  };
}

inline int int_param(const httplib::Request& req, const char* key, int fallback) {
  return req.has_param(key) ? std::stoi(req.get_param_value(key)) : fallback;
}

}  // namespace detail

inline void install_routes(httplib::Server& server, MatchService& service) {
  using detail::guarded;
  using detail::send_json;

  server.Post("/matches", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    json body = req.body.empty() ? json::object() : json::parse(req.body);
    CreateRequest cr;
    cr.mode = parse_mode(body.value("mode", std::string("blind_random")));
    if (cr.mode == Mode::kExplicit) {
      if (!body.contains("strategy")) throw ServiceError(ServiceError::Kind::kBadRequest, "explicit mode needs a strategy");
      cr.strategy = body.at("strategy").get<std::string>();
    }
    if (body.contains("seed")) cr.seed = body.at("seed").get<std::uint64_t>();
    cr.target = body.value("target", 0);
    Created c = service.create_match(cr);
    send_json(res, 201,
              {{"version", kApiVersion}, {"match_id", c.id}, {"token", c.token}, {"human_seat", c.human_seat}});
  }));

  server.Get(R"(/matches/([0-9a-f]+)/view)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, view_json(service.get_view(req.matches[1], detail::bearer(req))));
  }));

  server.Post(R"(/matches/([0-9a-f]+)/moves)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    std::string token = detail::bearer(req);
    std::string id = req.matches[1];
    Move m = move_from_json(json::parse(req.body));
    service.submit_move(id, token, m);
    auto snap = service.get_view(id, token);
    send_json(res, 200,
              {{"version", kApiVersion}, {"accepted", move_json(m)}, {"status", status_name(snap.status)},
               {"events", snap.events}});
  }));

  server.Get(R"(/matches/([0-9a-f]+)/events)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    std::string token = detail::bearer(req);
    std::string id = req.matches[1];
    int since = std::max(0, detail::int_param(req, "since", 0));
    service.status(id, token);  // authenticate before streaming
    bool sse = req.get_header_value("Accept").find("text/event-stream") != std::string::npos;
    if (!sse) {
      auto wait = std::chrono::milliseconds(std::clamp(detail::int_param(req, "wait_ms", 0), 0, 30000));
      json events = json::array();
      for (const auto& e : service.events(id, token, since, wait)) events.push_back(event_json(e));
      send_json(res, 200,
                {{"version", kApiVersion}, {"status", status_name(service.status(id, token))}, {"events", events}});
      return;
    }
    auto next = std::make_shared<int>(since);
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider("text/event-stream", [&service, id, token, next](std::size_t, httplib::DataSink& sink) {
      try {
        auto batch = service.events(id, token, *next, std::chrono::milliseconds(1000));
        for (const auto& e : batch) {
          std::string chunk = "id: " + std::to_string(e.index) + "\nevent: " + (e.match_end ? "match_end" : "move") +
                              "\ndata: " + event_json(e).dump() + "\n\n";
          if (!sink.write(chunk.data(), chunk.size())) return false;
          *next = e.index + 1;
        }
        if (batch.empty()) {
          std::string ping = ": ping\n\n";
          if (!sink.write(ping.data(), ping.size())) return false;
        }
        if (batch.empty() && service.status(id, token) == Status::kFinished) {
          sink.done();
        }
        return true;
      } catch (const std::exception&) {
        return false;
      }
    });
  }));

  server.Get("/study/export", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    StudyFilter f;
    if (req.has_param("strategy")) f.strategy = req.get_param_value("strategy");
    if (req.has_param("mode")) f.mode = parse_mode(req.get_param_value("mode"));
    auto records = service.export_study(f);
    res.status = 200;
    if (req.has_param("aggregate") && req.get_param_value("aggregate") == "1")
      res.set_content(study_aggregate_csv(aggregate_study(records, service.config().roster)), "text/csv");
    else
      res.set_content(study_csv(records), "text/csv");
  }));

  server.Get("/version", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"version", kApiVersion}, {"name", "scopone"}});
  });
}

}  // namespace scopone::service
