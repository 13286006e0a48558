// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/http_transport.hpp"

#include <fstream>
#include <sstream>

#include "httplib.h"

namespace spiar {

namespace {

constexpr const char* kJson = "application/json";
constexpr std::string_view kEmbedOpen = R"(<script id="spiar-bootstrap" type="application/json">)";
constexpr std::string_view kEmbedClose = "</script>";

std::string bootstrap_document(const std::string& payload) {
  std::string safe;
  safe.reserve(payload.size());
  for (std::size_t i = 0; i < payload.size(); ++i) {
    safe += payload[i];
    // Keep "</script>" from closing the embed early; "\/" is a JSON escape.
    if (payload[i] == '<' && i + 1 < payload.size() && payload[i + 1] == '/') safe += '\\';
  }
  std::string html =
      "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>SPIAR</title>\n</head>\n<body>\n"
      "<div id=\"spiar-root\"></div>\n";
  html += kEmbedOpen;
  html += safe;
  html += kEmbedClose;
  html += "\n<script src=\"/assets/engine.js\"></script>\n</body>\n</html>\n";
  return html;
}

std::string content_type(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".html") return "text/html";
  if (ext == ".css") return "text/css";
  if (ext == ".json" || ext == ".map") return kJson;
  return "application/octet-stream";
}

void reply_error(httplib::Response& res, int status, std::string_view error,
                 const std::vector<std::pair<std::string, PropertyValue>>& fields = {}) {
  res.status = status;
  res.set_content(encode_error(error, fields), kJson);
}

void reply_session_error(httplib::Response& res, const SessionError& e) {
  using Code = SessionError::Code;
  switch (e.code()) {
    case Code::kUnknownSession:
      return reply_error(res, 404, "unknown_session");
    case Code::kOutOfOrder:
      return reply_error(res, 409, "out_of_order",
                         {{"expected", std::int64_t{e.expected()}}, {"got", std::int64_t{e.got()}}});
    case Code::kUnknownView:
      return reply_error(res, 400, "unknown_view", {{"reason", std::string(e.what())}});
    case Code::kUnknownComponent:
      return reply_error(res, 400, "unknown_component", {{"reason", std::string(e.what())}});
    case Code::kUnknownEvent:
      return reply_error(res, 400, "unknown_event", {{"reason", std::string(e.what())}});
    case Code::kMalformedMessage:
      return reply_error(res, 400, "malformed_message", {{"reason", std::string(e.what())}});
  }
}

}  // namespace

std::optional<std::filesystem::path> resolve_asset(const std::filesystem::path& root, std::string_view relative) {
  std::filesystem::path out = root;
  std::size_t start = 0;
  while (start <= relative.size()) {
    std::size_t end = relative.find('/', start);
    if (end == std::string_view::npos) end = relative.size();
    std::string_view segment = relative.substr(start, end - start);
    if (segment == ".." || segment.find('\\') != std::string_view::npos || segment.find('\0') != std::string_view::npos) {
      return std::nullopt;
    }
    if (!segment.empty() && segment != ".") out /= std::string(segment);
    start = end + 1;
  }
  std::error_code ec;
  auto base = std::filesystem::weakly_canonical(root, ec);
  if (ec) return std::nullopt;
  auto full = std::filesystem::weakly_canonical(out, ec);
  if (ec) return std::nullopt;
  auto [b, f] = std::mismatch(base.begin(), base.end(), full.begin(), full.end());
  if (b != base.end()) return std::nullopt;  // symlink pointing outside
  return full;
}

std::optional<std::string> extract_bootstrap(std::string_view html) {
  auto open = html.find(kEmbedOpen);
  if (open == std::string_view::npos) return std::nullopt;
  auto begin = open + kEmbedOpen.size();
  auto close = html.find(kEmbedClose, begin);
  if (close == std::string_view::npos) return std::nullopt;
  return std::string(html.substr(begin, close - begin));
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(ServerConfig config) : config_(std::move(config)), impl_(std::make_unique<Impl>()) {
  if (config_.idle_timeout.count() <= 0) throw std::invalid_argument("idle timeout must be positive");
  SessionOptions options;
  options.idle_timeout = config_.idle_timeout;
  options.id_generator = config_.session_id_generator;
  runtime_ = std::make_unique<SessionRuntime>(config_.app, std::move(options));

  auto& svr = impl_->server;
  // SO_REUSEADDR only; httplib would also set SO_REUSEPORT.
  svr.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  svr.new_task_queue = [n = std::max<std::size_t>(config_.worker_threads, 1)] { return new httplib::ThreadPool(n); };
  auto record = [this](Direction d, std::string_view payload) {
    if (config_.record) config_.record(d, payload);
  };

  svr.Get("/app", [this, record](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> view;
    if (req.has_param("view")) view = req.get_param_value("view");
    if (view && !is_valid_view_name(*view)) return reply_error(res, 404, "unknown_view");
    try {
      auto [id, response] = runtime_->create_session(view);
      std::string payload = encode_server(response);
      record(Direction::kClientToServer, encode_client(DeltaClientMessage{"", 0, {}, std::nullopt, view}));
      record(Direction::kServerToClient, payload);
      res.set_content(bootstrap_document(payload), "text/html; charset=utf-8");
    } catch (const SessionError& e) {
      if (e.code() != SessionError::Code::kUnknownView) throw;
      reply_error(res, 404, "unknown_view");
    }
  });

  svr.Post("/app/delta", [this, record](const httplib::Request& req, httplib::Response& res) {
    DeltaClientMessage msg;
    try {
      msg = decode_client(req.body);
    } catch (const CodecError& e) {
      return reply_error(res, 400, "malformed_message",
                         {{"position", e.position()}, {"reason", e.reason()}});
    }
    try {
      std::string payload;
      runtime_->process(msg.session, msg, [&](const DeltaServerMessage& response) {
        payload = encode_server(response);
        record(Direction::kClientToServer, req.body);
        record(Direction::kServerToClient, payload);
      });
      res.set_content(payload, kJson);
    } catch (const SessionError& e) {
      reply_session_error(res, e);
    }
  });

  svr.Get(R"(/assets/(.*))", [this](const httplib::Request& req, httplib::Response& res) {
    auto path = resolve_asset(config_.asset_dir, req.matches[1].str());
    if (!path) return reply_error(res, 403, "forbidden");
    std::error_code ec;
    if (!std::filesystem::is_regular_file(*path, ec)) return reply_error(res, 404, "not_found");
    std::ifstream in(*path, std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    res.set_content(body.str(), content_type(*path));
  });

  svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    reply_error(res, 500, "internal_error", {{"reason", what}});
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& svr = impl_->server;
  if (config_.port == 0) {
    port_ = svr.bind_to_any_port(config_.host);
    if (port_ < 0) throw Error("cannot bind " + config_.host);
  } else {
    if (!svr.bind_to_port(config_.host, config_.port)) {
      throw Error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
    }
    port_ = config_.port;
  }
  {
    std::lock_guard lock(sweep_mutex_);
    stopping_ = false;
  }
  sweeper_ = std::thread([this] { sweep_loop(); });
  return port_;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

int HttpServer::start() {
  int port = bind();
  server_thread_ = std::thread([this] { listen(); });
  impl_->server.wait_until_ready();
  return port;
}

void HttpServer::stop() {
  impl_->server.stop();
  {
    std::lock_guard lock(sweep_mutex_);
    stopping_ = true;
  }
  sweep_cv_.notify_all();
  if (server_thread_.joinable()) server_thread_.join();
  if (sweeper_.joinable()) sweeper_.join();
}

void HttpServer::sweep_loop() {
  auto period = std::min<std::chrono::steady_clock::duration>(config_.idle_timeout, std::chrono::seconds(1));
  std::unique_lock lock(sweep_mutex_);
  while (!sweep_cv_.wait_for(lock, period, [this] { return stopping_; })) {
    lock.unlock();
    runtime_->expire_idle();
    lock.lock();
  }
}

}  // namespace spiar
