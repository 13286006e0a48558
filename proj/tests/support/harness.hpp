// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "spiar/client_engine.hpp"
#include "spiar/delta_codec.hpp"
#include "spiar/session_runtime.hpp"

namespace spiar::testing {

/// Sends `msg` to the runtime through the wire encoding in both directions
/// and applies the answer to `engine`. Returns the response bytes.
inline std::string loopback(SessionRuntime& runtime, ClientEngine& engine, const DeltaClientMessage& msg) {
  DeltaClientMessage request = decode_client(encode_client(msg));
  std::string response = encode_server(runtime.process(request.session, request));
  engine.apply_server_delta(decode_server(response));
  return response;
}

inline ClientEngine open_session(SessionRuntime& runtime, const std::optional<std::string>& fragment = std::nullopt) {
  auto [id, bootstrap] = runtime.create_session(fragment);
  return ClientEngine::bootstrap(decode_server(encode_server(bootstrap)));
}

}  // namespace spiar::testing
