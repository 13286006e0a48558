// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

// spiar serve|inspect|stats
//
// Exit codes: 0 ok, 1 data error (bad log, bind failure), 2 usage error.

#include <pthread.h>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "spiar/demo_app.hpp"
#include "spiar/http_transport.hpp"
#include "spiar/inspector.hpp"
#include "spiar/traffic_log.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string record;
  std::string assets = "assets";
  long timeout_secs = 1800;
};

std::optional<std::pair<std::string, int>> parse_bind(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) return std::nullopt;
  try {
    std::size_t used = 0;
    int port = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) return std::nullopt;
    return std::make_pair(text.substr(0, colon), port);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool valid_port(int port) { return port >= 0 && port <= 65535; }

int serve(ServeOptions opts) {
  if (const char* bind = std::getenv("SPIAR_BIND"); bind != nullptr && *bind != '\0') {
    auto parsed = parse_bind(bind);
    if (!parsed) {
      std::cerr << "spiar: invalid SPIAR_BIND '" << bind << "', expected host:port\n";
      return kUsageError;
    }
    std::tie(opts.host, opts.port) = *parsed;
  }
  if (!valid_port(opts.port)) {
    std::cerr << "spiar: invalid port " << opts.port << "\n";
    return kUsageError;
  }
  if (opts.timeout_secs <= 0) {
    std::cerr << "spiar: --timeout-secs must be positive\n";
    return kUsageError;
  }

  std::unique_ptr<spiar::TrafficRecorder> recorder;
  spiar::ServerConfig config;
  config.host = opts.host;
  config.port = opts.port;
  config.app = spiar::demo_application();
  config.asset_dir = opts.assets;
  config.idle_timeout = std::chrono::seconds(opts.timeout_secs);
  if (!opts.record.empty()) {
    try {
      recorder = std::make_unique<spiar::TrafficRecorder>(opts.record);
    } catch (const spiar::Error& e) {
      std::cerr << "spiar: " << e.what() << "\n";
      return kDataError;
    }
    config.record = [r = recorder.get()](spiar::Direction d, std::string_view payload) { r->append(d, payload); };
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  spiar::HttpServer server(std::move(config));
  int port = 0;
  try {
    port = server.bind();
  } catch (const spiar::Error& e) {
    std::cerr << "spiar: " << e.what() << "\n";
    return kDataError;
  }
  std::cout << "spiar: serving on http://" << opts.host << ":" << port << "/app" << std::endl;

  std::thread waiter([&server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kOk;
}

int read_log(const std::string& path, int (*fn)(std::istream&, std::ostream&)) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "spiar: cannot open " << path << "\n";
    return kDataError;
  }
  return fn(in, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPIAR single-page application server and protocol inspector"};
  app.require_subcommand(1);

  ServeOptions serve_opts;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the bundled demo application");
  serve_cmd->add_option("--host", serve_opts.host, "Address to bind");
  serve_cmd->add_option("--port", serve_opts.port, "TCP port (0 picks a free one)");
  serve_cmd->add_option("--record", serve_opts.record, "Append every delta exchange to this traffic log");
  serve_cmd->add_option("--assets", serve_opts.assets, "Directory served under /assets");
  serve_cmd->add_option("--timeout-secs", serve_opts.timeout_secs, "Idle session timeout in seconds");

  std::string log_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print a readable trace of a traffic log");
  inspect_cmd->add_option("log", log_path, "Traffic log file")->required();
  auto* stats_cmd = app.add_subcommand("stats", "Compare delta sizes with full-render sizes");
  stats_cmd->add_option("log", log_path, "Traffic log file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  if (*serve_cmd) return serve(serve_opts);
  if (*inspect_cmd) return read_log(log_path, spiar::inspect_log);
  return read_log(log_path, spiar::print_stats);
}
