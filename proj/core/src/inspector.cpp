// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/inspector.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include "spiar/delta_codec.hpp"

namespace spiar {

namespace {

std::string events_text(const EventSet& events) {
  std::string out = "{";
  for (const auto& e : events) {
    if (out.size() > 1) out += ',';
    out += e;
  }
  return out + "}";
}

void outline(std::ostream& out, const RepresentationalNode& node, int depth) {
  out << std::string(static_cast<std::size_t>(6 + 2 * depth), ' ') << node.id << ' ' << node.type;
  for (const auto& [name, value] : node.properties) out << ' ' << name << '=' << describe(value);
  if (!node.listened_events.empty()) out << " listens" << events_text(node.listened_events);
  out << '\n';
  for (const auto& child : node.children) outline(out, child, depth + 1);
}

void trace_client(std::ostream& out, const DeltaClientMessage& m) {
  out << " session=" << (m.session.empty() ? "(bootstrap)" : m.session) << " seq=" << m.seq << '\n';
  if (m.fragment) out << "    fragment: " << *m.fragment << '\n';
  for (const auto& c : m.state_changes) out << "    state: " << c.id << '.' << c.name << " = " << describe(c.value) << '\n';
  if (m.action) {
    out << "    action: " << m.action->event << " on " << m.action->id;
    if (!std::holds_alternative<std::monostate>(m.action->payload)) out << " payload=" << describe(m.action->payload);
    out << '\n';
  }
}

void trace_server(std::ostream& out, const DeltaServerMessage& m) {
  out << " session=" << m.session << " ack=" << m.ack << " fragment=" << m.fragment.value_or("-") << " directives="
      << m.directives.size() << '\n';
  for (const auto& d : m.directives) {
    std::visit(
        [&out](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, directive::Create>) {
            out << "    create " << x.node.id << ' ' << x.node.type;
            if (x.parent) {
              out << " under " << *x.parent << " at " << x.index;
            } else {
              out << " as root";
            }
            out << " (" << x.node.size() << " nodes)\n";
            outline(out, x.node, 0);
          } else if constexpr (std::is_same_v<T, directive::Remove>) {
            out << "    remove " << x.id << '\n';
          } else if constexpr (std::is_same_v<T, directive::SetProperty>) {
            out << "    set " << x.id << '.' << x.name << " = " << describe(x.value) << '\n';
          } else {
            out << "    listeners " << x.id << ' ' << events_text(x.listened_events) << '\n';
          }
        },
        d);
  }
}

DeltaServerMessage full_render_message(const DeltaServerMessage& m, const RepresentationalModel& model) {
  return DeltaServerMessage{m.session, m.ack, {directive::Create{std::nullopt, 0, model.root()}}, m.fragment};
}

}  // namespace

int inspect_log(std::istream& in, std::ostream& out) {
  int rc = 0;
  for (const auto& line : parse_traffic_log(in)) {
    if (!line.record) {
      out << "line " << line.line_number << ": malformed: " << line.error << '\n';
      rc = 1;
      continue;
    }
    const TrafficRecord& r = *line.record;
    try {
      if (r.direction == Direction::kClientToServer) {
        auto m = decode_client(r.payload);
        out << "[" << line.line_number << "] C2S " << r.timestamp;
        trace_client(out, m);
      } else {
        auto m = decode_server(r.payload);
        out << "[" << line.line_number << "] S2C " << r.timestamp;
        trace_server(out, m);
      }
    } catch (const CodecError& e) {
      out << "line " << line.line_number << ": malformed: " << e.what() << '\n';
      rc = 1;
    }
  }
  return rc;
}

double StatsRow::ratio() const { return full_bytes == 0 ? 0.0 : static_cast<double>(delta_bytes) / full_bytes; }

double StatsReport::total_ratio() const {
  return total_full_bytes == 0 ? 0.0 : static_cast<double>(total_delta_bytes) / total_full_bytes;
}

StatsReport compute_stats(const std::vector<ParsedLine>& lines) {
  StatsReport report;
  std::map<std::string, std::int64_t> last_ack;
  std::map<std::string, DeltaClientMessage> requests;
  auto fail = [&report](std::size_t n, const std::string& why) {
    report.errors.push_back("line " + std::to_string(n) + ": " + why);
  };
  for (const auto& line : lines) {
    if (!line.record) {
      fail(line.line_number, line.error);
      continue;
    }
    const TrafficRecord& r = *line.record;
    try {
      if (r.direction == Direction::kClientToServer) {
        auto request = decode_client(r.payload);
        if (!request.session.empty()) requests[request.session] = std::move(request);
        continue;
      }
      DeltaServerMessage m = decode_server(r.payload);
      RepresentationalModel& model = report.models[m.session];
      auto last = last_ack.find(m.session);
      if (m.ack == 0) {
        model = RepresentationalModel();
      } else if (model.empty()) {
        fail(line.line_number, "no bootstrap recorded for session " + m.session);
        continue;
      } else if (m.ack == last->second) {
        continue;  // answer to a retried request, already applied
      } else if (m.ack < last->second) {
        fail(line.line_number, "ack " + std::to_string(m.ack) + " after ack " + std::to_string(last->second));
        continue;
      }
      if (m.ack != 0) {
        // Client writes travel in the request, not in the response.
        auto req = requests.find(m.session);
        if (req == requests.end() || req->second.seq != m.ack) {
          fail(line.line_number, "no request recorded for ack " + std::to_string(m.ack));
          continue;
        }
        RepresentationalModel next = model;
        for (const auto& c : req->second.state_changes) {
          auto* node = next.find(c.id);
          if (node == nullptr) throw Error("request writes unknown component " + c.id.str());
          node->properties.insert_or_assign(c.name, c.value);
        }
        next.apply_all(m.directives);
        model = std::move(next);
      } else {
        model.apply_all(m.directives);
      }
      last_ack[m.session] = m.ack;
      StatsRow row{line.line_number, m.session, m.ack, m.directives.size(), r.payload.size(),
                   encode_server(full_render_message(m, model)).size()};
      report.total_delta_bytes += row.delta_bytes;
      report.total_full_bytes += row.full_bytes;
      report.rows.push_back(std::move(row));
    } catch (const Error& e) {
      fail(line.line_number, e.what());
    }
  }
  for (auto it = report.models.begin(); it != report.models.end();) {
    it = it->second.empty() ? report.models.erase(it) : std::next(it);
  }
  return report;
}

int print_stats(std::istream& in, std::ostream& out) {
  StatsReport report = compute_stats(parse_traffic_log(in));
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s %-12s %6s %10s %12s %12s %8s\n", "line", "session", "ack", "directives",
                "delta_bytes", "full_bytes", "ratio");
  out << buf;
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%-6zu %-12s %6lld %10zu %12zu %12zu %8.4f\n", row.line_number,
                  row.session.substr(0, 12).c_str(), static_cast<long long>(row.ack), row.directives, row.delta_bytes,
                  row.full_bytes, row.ratio());
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-6s %-12s %6s %10s %12zu %12zu %8.4f\n", "total", "", "", "", report.total_delta_bytes,
                report.total_full_bytes, report.total_ratio());
  out << buf;
  for (const auto& e : report.errors) out << e << '\n';
  return report.errors.empty() ? 0 : 1;
}

}  // namespace spiar
