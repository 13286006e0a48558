// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spiar/delta_codec.hpp"
#include "spiar/representational_model.hpp"

namespace spiar {

/// What the user did in the browser.
struct UserEvent {
  ComponentId target;
  std::string event;
  PropertyValue payload;
};

class EngineError : public Error {
 public:
  enum class Code { kUnknownComponent, kBusy, kAckMismatch, kMalformedDirective, kNotBootstrap,
                    kInvalidPayload };
  EngineError(Code code, const std::string& what) : Error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

class ClientEngine;

/// Local reaction to an event that needs no round-trip. Handlers only touch
/// the engine's model (through ClientEngine::write_local), never the network.
using ClientHandler = std::function<void(ClientEngine&, const UserEvent&)>;

/// Headless AJAX engine: a non-blocking state machine in which sending a
/// request and receiving its response are separate transitions.
class ClientEngine {
 public:
  /// Builds the engine from an ack-0 bootstrap response. Ships the built-in
  /// handlers (textfield emptiness check, checkbox toggle).
  static ClientEngine bootstrap(const DeltaServerMessage& response);

  std::optional<DeltaClientMessage> simulate_event(const UserEvent& ev);
  void apply_server_delta(const DeltaServerMessage& response);
  DeltaClientMessage navigate(const std::string& view);

  /// Writes a property locally and buffers it for the next request.
  void write_local(const ComponentId& id, const std::string& name, PropertyValue value);

  void set_handler(std::string type, std::string event, ClientHandler handler);
  void clear_handlers() { handlers_.clear(); }

  const RepresentationalModel& model() const { return model_; }
  const std::string& session() const { return session_; }
  std::int64_t next_seq() const { return next_seq_; }
  bool in_flight() const { return in_flight_.has_value(); }
  const std::string& fragment() const { return fragment_; }
  const std::vector<ClientStateChange>& pending() const { return pending_; }
  std::uint64_t messages_sent() const { return messages_sent_; }

 private:
  ClientEngine() = default;
  DeltaClientMessage send(std::optional<ClientAction> action, std::optional<std::string> fragment);

  std::string session_;
  std::int64_t next_seq_ = 1;
  RepresentationalModel model_;
  std::vector<ClientStateChange> pending_;
  std::string fragment_;
  std::optional<std::int64_t> in_flight_;
  std::uint64_t messages_sent_ = 0;
  std::map<std::pair<std::string, std::string>, ClientHandler> handlers_;
};

}  // namespace spiar
