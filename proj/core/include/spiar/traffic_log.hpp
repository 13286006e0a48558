// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <fstream>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spiar {

enum class Direction { kClientToServer, kServerToClient };

std::string_view to_string(Direction d);

/// One captured payload. Serialized as `<C2S|S2C> <ISO-8601> <raw-json>`.
struct TrafficRecord {
  Direction direction = Direction::kClientToServer;
  std::string timestamp;
  std::string payload;
};

/// UTC, millisecond precision: 2026-10-17T09:30:00.125Z
std::string iso8601(std::chrono::system_clock::time_point t);

std::string format_record(const TrafficRecord& r);

struct ParsedLine {
  std::size_t line_number = 0;
  std::optional<TrafficRecord> record;
  /// Set when the line is not a well-formed record.
  std::string error;
};

/// Splits a log into records; never throws on bad content. Blank lines are
/// skipped. Timestamps must not decrease.
std::vector<ParsedLine> parse_traffic_log(std::istream& in);

/// Append-only, thread-safe writer of a traffic log file.
class TrafficRecorder {
 public:
  explicit TrafficRecorder(const std::string& path);
  void append(Direction direction, std::string_view payload);

 private:
  std::mutex mutex_;
  std::ofstream out_;
  std::string last_timestamp_;
};

}  // namespace spiar
