// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "spiar/session_runtime.hpp"
#include "spiar/traffic_log.hpp"

namespace spiar {

using TrafficSink = std::function<void(Direction, std::string_view)>;

struct ServerConfig {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 8080;
  ApplicationDefinition app;
  std::filesystem::path asset_dir = "assets";
  std::chrono::seconds idle_timeout{1800};
  /// Request workers. Each open keep-alive connection occupies one.
  std::size_t worker_threads = 64;
  /// Receives every delta payload exchanged, including the bootstrap pair.
  TrafficSink record;
  /// Forwarded to the session runtime (tests inject deterministic ids).
  std::function<std::string()> session_id_generator;
};

/// Maps a URL-decoded asset path onto `root`; nullopt if it escapes it.
std::optional<std::filesystem::path> resolve_asset(const std::filesystem::path& root,
                                                   std::string_view relative);

/// Extracts the bootstrap payload embedded in the HTML served for /app.
std::optional<std::string> extract_bootstrap(std::string_view html);

/// HTTP face of the framework:
///   GET  /app?view=<v>   bootstrap document (creates a session)
///   POST /app/delta      DELTA-CLIENT in, DELTA-SERVER out
///   GET  /assets/<path>  static files for the browser engine
class HttpServer {
 public:
  explicit HttpServer(ServerConfig config);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; returns the bound port. Throws Error on failure.
  int bind();
  /// Serves on the calling thread until stop().
  void listen();
  /// bind() + listen() on a background thread; returns the port.
  int start();
  void stop();

  SessionRuntime& runtime() { return *runtime_; }
  int port() const { return port_; }

 private:
  struct Impl;
  void sweep_loop();

  ServerConfig config_;
  std::unique_ptr<SessionRuntime> runtime_;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
  std::thread server_thread_;
  std::thread sweeper_;
  std::mutex sweep_mutex_;
  std::condition_variable sweep_cv_;
  bool stopping_ = false;
};

}  // namespace spiar
