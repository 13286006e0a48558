// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>

#include "spiar/component_tree.hpp"
#include "spiar/delta_codec.hpp"
#include "spiar/update_manager.hpp"

namespace spiar {

using ViewProcedure = std::function<void(ComponentTree&)>;

/// What an application supplies: the initial tree (with listeners) and its
/// URI-addressable views.
struct ApplicationDefinition {
  std::function<void(ComponentTree&)> init;
  std::map<std::string, ViewProcedure, std::less<>> views;

  /// Throws std::invalid_argument for view names that are not valid fragments.
  void validate() const;
};

class SessionError : public Error {
 public:
  enum class Code {
    kUnknownSession,
    kUnknownView,
    kOutOfOrder,
    kUnknownComponent,
    kUnknownEvent,
    kMalformedMessage,
  };
  SessionError(Code code, const std::string& what) : Error(what), code_(code) {}
  static SessionError out_of_order(std::int64_t expected, std::int64_t got);

  Code code() const { return code_; }
  std::int64_t expected() const { return expected_; }
  std::int64_t got() const { return got_; }

 private:
  Code code_;
  std::int64_t expected_ = 0;
  std::int64_t got_ = 0;
};

/// Per-client server state.
struct Session {
  std::string id;
  ComponentTree tree;
  DirtyLog log;
  std::int64_t expected_seq = 1;
  DeltaServerMessage last_response;
  std::string current_view;
};

struct SessionOptions {
  /// Sessions untouched for longer than this are expired on access or sweep.
  std::optional<std::chrono::steady_clock::duration> idle_timeout;
  /// Produces session ids; defaults to 128 random bits in hex.
  std::function<std::string()> id_generator;
  std::function<std::chrono::steady_clock::time_point()> clock;
};

/// Owns sessions and runs the request pipeline. Requests for different
/// sessions run concurrently; requests for one session are mutually exclusive.
class SessionRuntime {
 public:
  explicit SessionRuntime(ApplicationDefinition app, SessionOptions options = {});
  ~SessionRuntime();
  SessionRuntime(const SessionRuntime&) = delete;
  SessionRuntime& operator=(const SessionRuntime&) = delete;

  /// Bootstrap: returns the new session id and an ack-0 response whose only
  /// directive creates the whole tree.
  std::pair<std::string, DeltaServerMessage> create_session(
      const std::optional<std::string>& fragment = std::nullopt);

  /// `committed` runs under the session lock once the response is known,
  /// for retries too; observers see one session's exchanges in order.
  using CommitHook = std::function<void(const DeltaServerMessage&)>;
  DeltaServerMessage process(const std::string& session_id, const DeltaClientMessage& msg,
                             const CommitHook& committed = {});

  void expire_session(const std::string& session_id);
  /// Expires every session idle past the configured timeout; returns how many.
  std::size_t expire_idle();

  std::size_t session_count() const;
  /// Requests that ran the pipeline (retries answered from cache excluded).
  std::uint64_t processed_count() const;

  /// Runs `fn` on the session under its lock. Test and tooling hook.
  void inspect(const std::string& session_id, const std::function<void(const Session&)>& fn) const;
  RepresentationalModel render(const std::string& session_id) const;

  const ApplicationDefinition& app() const { return app_; }

 private:
  struct Slot;
  std::shared_ptr<Slot> find(const std::string& session_id) const;
  void run_pipeline(Session& s, const DeltaClientMessage& msg);
  void validate_request(const Session& s, const DeltaClientMessage& msg) const;

  ApplicationDefinition app_;
  SessionOptions options_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Slot>, std::less<>> sessions_;
  std::mutex id_mutex_;
  std::atomic<std::uint64_t> processed_{0};
};

}  // namespace spiar
