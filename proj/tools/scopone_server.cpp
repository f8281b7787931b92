// scopone_server: HTTP front end for live human-vs-AI matches.

#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "scopone/service/http_api.hpp"

namespace {
httplib::Server* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scopone match server"};
  std::string host = "127.0.0.1", data_dir = "data";
  int port = 8080, workers = 2;
  double delay_min = 1.0, delay_max = 4.0;
  std::uint64_t seed = 0;
  app.add_option("--host", host);
  app.add_option("--port", port);
  app.add_option("--data", data_dir, "directory for match logs");
  app.add_option("--workers", workers, "AI worker threads");
  app.add_option("--delay-min", delay_min, "seconds");
  app.add_option("--delay-max", delay_max, "seconds");
  auto* seed_opt = app.add_option("--seed", seed, "service RNG seed");
  CLI11_PARSE(app, argc, argv);

  scopone::service::ServiceConfig cfg;
  cfg.data_dir = data_dir;
  cfg.workers = workers;
  cfg.delay_min = delay_min;
  cfg.delay_max = delay_max;
  if (*seed_opt) cfg.seed = seed;

  try {
    scopone::service::MatchService service(cfg);
    httplib::Server server;
    scopone::service::install_routes(server, service);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on " << host << ':' << port << ", " << service.match_count() << " matches recovered\n";
    if (!server.listen(host, port)) {
      std::cerr << "cannot listen on " << host << ':' << port << '\n';
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "scopone_server: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
