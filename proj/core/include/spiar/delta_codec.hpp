// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spiar/component_id.hpp"
#include "spiar/error.hpp"
#include "spiar/property_value.hpp"
#include "spiar/representational_model.hpp"

namespace spiar {

inline constexpr int kProtocolVersion = 1;

struct ClientStateChange {
  ComponentId id;
  std::string name;
  PropertyValue value;
  friend bool operator==(const ClientStateChange&, const ClientStateChange&) = default;
};

struct ClientAction {
  ComponentId id;
  std::string event;
  /// Null when the event carries no payload.
  PropertyValue payload;
  friend bool operator==(const ClientAction&, const ClientAction&) = default;
};

/// DELTA-CLIENT: client state changes plus the action that triggered the send.
struct DeltaClientMessage {
  std::string session;
  std::int64_t seq = 0;
  std::vector<ClientStateChange> state_changes;
  std::optional<ClientAction> action;
  std::optional<std::string> fragment;
  friend bool operator==(const DeltaClientMessage&, const DeltaClientMessage&) = default;
};

/// DELTA-SERVER: the ordered directives answering request `ack`.
struct DeltaServerMessage {
  std::string session;
  std::int64_t ack = 0;
  std::vector<DeltaDirective> directives;
  std::optional<std::string> fragment;
  friend bool operator==(const DeltaServerMessage&, const DeltaServerMessage&) = default;
};

class CodecError : public Error {
 public:
  enum class Code { kMalformedMessage, kUnknownDirectiveKind, kUnknownValueTag, kInvalidMessage };
  /// `position` is a byte offset ("byte 12") for syntax errors or a JSON
  /// pointer ("/directives/0/id") for schema errors.
  CodecError(Code code, std::string position, std::string reason);
  Code code() const { return code_; }
  const std::string& position() const { return position_; }
  const std::string& reason() const { return reason_; }

 private:
  Code code_;
  std::string position_;
  std::string reason_;
};

/// Canonical encoding: UTF-8 JSON, object keys sorted, no whitespace.
/// Encoders throw CodecError{kInvalidMessage} for messages violating their
/// invariants (non-finite reals, invalid UTF-8, empty non-bootstrap request).
std::string encode_client(const DeltaClientMessage& msg);
DeltaClientMessage decode_client(std::string_view bytes);
std::string encode_server(const DeltaServerMessage& msg);
DeltaServerMessage decode_server(std::string_view bytes);

/// Canonical JSON for an arbitrary flat error object, used by the transport
/// for error bodies.
std::string encode_error(std::string_view error,
                         const std::vector<std::pair<std::string, PropertyValue>>& fields = {});

/// Unreserved URI characters only, nonempty.
bool is_valid_view_name(std::string_view name);
/// Empty (bootstrap) or 32 lowercase hex digits.
bool is_valid_session_id(std::string_view id);

}  // namespace spiar
