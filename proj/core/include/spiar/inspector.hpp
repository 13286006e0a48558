// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "spiar/representational_model.hpp"
#include "spiar/traffic_log.hpp"

namespace spiar {

/// Prints a human-readable trace of every record. Returns 0, or 1 if any
/// record was malformed (it is still printed, with the reason).
int inspect_log(std::istream& in, std::ostream& out);

struct StatsRow {
  std::size_t line_number = 0;
  std::string session;
  std::int64_t ack = 0;
  std::size_t directives = 0;
  std::size_t delta_bytes = 0;
  std::size_t full_bytes = 0;
  double ratio() const;
};

struct StatsReport {
  std::vector<StatsRow> rows;
  std::size_t total_delta_bytes = 0;
  std::size_t total_full_bytes = 0;
  /// Final reconstructed model per session.
  std::map<std::string, RepresentationalModel> models;
  std::vector<std::string> errors;
  double total_ratio() const;
};

/// Replays a log per session (each request's client writes, then the
/// response's directives) and measures each delta against the encoded size of
/// the full model it produces.
StatsReport compute_stats(const std::vector<ParsedLine>& lines);
/// Prints the report; returns 0, or 1 on data errors.
int print_stats(std::istream& in, std::ostream& out);

}  // namespace spiar
