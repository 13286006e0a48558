// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/traffic_log.hpp"

#include <cctype>
#include <cstdio>
#include <ctime>
#include <istream>

#include "spiar/error.hpp"

namespace spiar {

namespace {

bool is_timestamp(std::string_view t) {
  // YYYY-MM-DDTHH:MM:SS.mmmZ
  static constexpr std::string_view kShape = "dddd-dd-ddTdd:dd:dd.dddZ";
  if (t.size() != kShape.size()) return false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (kShape[i] == 'd' ? !std::isdigit(static_cast<unsigned char>(t[i])) : t[i] != kShape[i]) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(Direction d) { return d == Direction::kClientToServer ? "C2S" : "S2C"; }

std::string iso8601(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  auto secs = time_point_cast<seconds>(t);
  if (secs > t) secs -= seconds(1);
  auto millis = duration_cast<milliseconds>(t - secs).count();
  std::time_t tt = system_clock::to_time_t(secs);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[40];
  std::size_t n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + n, sizeof buf - n, ".%03dZ", static_cast<int>(millis));
  return buf;
}

std::string format_record(const TrafficRecord& r) {
  std::string out(to_string(r.direction));
  out += ' ';
  out += r.timestamp;
  out += ' ';
  out += r.payload;
  return out;
}

std::vector<ParsedLine> parse_traffic_log(std::istream& in) {
  std::vector<ParsedLine> out;
  std::string line;
  std::string previous;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ParsedLine parsed;
    parsed.line_number = number;
    auto first = line.find(' ');
    auto second = first == std::string::npos ? std::string::npos : line.find(' ', first + 1);
    if (second == std::string::npos) {
      parsed.error = "truncated record: expected '<C2S|S2C> <timestamp> <payload>'";
      out.push_back(std::move(parsed));
      continue;
    }
    std::string_view dir = std::string_view(line).substr(0, first);
    std::string stamp = line.substr(first + 1, second - first - 1);
    TrafficRecord r;
    if (dir == "C2S") {
      r.direction = Direction::kClientToServer;
    } else if (dir == "S2C") {
      r.direction = Direction::kServerToClient;
    } else {
      parsed.error = "unknown direction '" + std::string(dir) + "'";
      out.push_back(std::move(parsed));
      continue;
    }
    if (!is_timestamp(stamp)) {
      parsed.error = "bad timestamp '" + stamp + "'";
    } else if (stamp < previous) {
      parsed.error = "timestamp " + stamp + " earlier than previous record";
    } else {
      previous = stamp;
      r.timestamp = std::move(stamp);
      r.payload = line.substr(second + 1);
      parsed.record = std::move(r);
    }
    out.push_back(std::move(parsed));
  }
  return out;
}

TrafficRecorder::TrafficRecorder(const std::string& path) : out_(path, std::ios::app) {
  if (!out_) throw Error("cannot open traffic log " + path);
}

void TrafficRecorder::append(Direction direction, std::string_view payload) {
  std::lock_guard lock(mutex_);
  std::string stamp = iso8601(std::chrono::system_clock::now());
  // The wall clock can step back; the log's timestamps must not.
  if (stamp < last_timestamp_) stamp = last_timestamp_;
  last_timestamp_ = stamp;
  out_ << format_record(TrafficRecord{direction, stamp, std::string(payload)}) << '\n';
  out_.flush();
}

}  // namespace spiar
