// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/delta_codec.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"
#include "spiar/widgets.hpp"

namespace spiar {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxDepth = 256;

[[noreturn]] void malformed(const std::string& where, const std::string& reason) {
  throw CodecError(CodecError::Code::kMalformedMessage, where, reason);
}

[[noreturn]] void invalid(const std::string& reason) {
  throw CodecError(CodecError::Code::kInvalidMessage, "", reason);
}

bool is_property_name(std::string_view s) {
  if (s.empty() || s.size() > 64 || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-')) return false;
  return true;
}

std::string dump(const json& j) {
  try {
    return j.dump(-1, ' ', false, json::error_handler_t::strict);
  } catch (const json::type_error& e) {
    invalid(std::string("text is not valid UTF-8: ") + e.what());
  }
}

// ---- encoding -------------------------------------------------------------

json encode_value(const PropertyValue& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(x)) invalid("real values must be finite");
          return x;
        } else {
          return x;
        }
      },
      v);
}

std::string checked_id(const ComponentId& id) {
  if (id.empty()) invalid("empty component id");
  return id.str();
}

void check_view(const std::optional<std::string>& fragment) {
  if (fragment && !is_valid_view_name(*fragment)) invalid("invalid view name '" + *fragment + "'");
}

json encode_events(const EventSet& events) {
  json out = json::array();
  for (const auto& e : events) {
    if (!is_known_event(e)) invalid("unknown event " + e);
    out.push_back(e);
  }
  return out;
}

json encode_node(const RepresentationalNode& node, std::size_t depth) {
  if (depth > kMaxDepth) invalid("subtree too deep");
  if (find_widget(node.type) == nullptr) invalid("unknown component type " + node.type);
  json props = json::object();
  for (const auto& [name, value] : node.properties) props[name] = encode_value(value);
  json children = json::array();
  for (const auto& child : node.children) children.push_back(encode_node(child, depth + 1));
  return json{{"children", std::move(children)},
              {"id", checked_id(node.id)},
              {"listened_events", encode_events(node.listened_events)},
              {"properties", std::move(props)},
              {"type", node.type}};
}

json encode_directive(const DeltaDirective& d) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, directive::Create>) {
          json j = encode_node(x.node, 0);
          j["kind"] = "create";
          j["parent"] = x.parent ? json(checked_id(*x.parent)) : json(nullptr);
          j["index"] = x.index;
          return j;
        } else if constexpr (std::is_same_v<T, directive::Remove>) {
          return json{{"id", checked_id(x.id)}, {"kind", "remove"}};
        } else if constexpr (std::is_same_v<T, directive::SetProperty>) {
          if (!is_property_name(x.name)) invalid("invalid property name " + x.name);
          return json{{"id", checked_id(x.id)}, {"kind", "set_property"}, {"name", x.name},
                      {"value", encode_value(x.value)}};
        } else {
          return json{{"id", checked_id(x.id)}, {"kind", "set_listeners"},
                      {"listened_events", encode_events(x.listened_events)}};
        }
      },
      d);
}

// ---- decoding -------------------------------------------------------------

/// View over a JSON object that insists on known keys only.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) malformed(path_.empty() ? "/" : path_, "expected an object");
  }

  const json& at(const char* key) {
    auto it = j_.find(key);
    if (it == j_.end()) malformed(path_ + "/" + key, std::string("missing key '") + key + "'");
    ++used_;
    return *it;
  }
  std::string path(const char* key) const { return path_ + "/" + key; }

  void finish() const {
    if (used_ == j_.size()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      malformed(path_ + "/" + it.key(), "unexpected key '" + it.key() + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::size_t used_ = 0;
};

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) malformed(where, "expected a string");
  return j.get<std::string>();
}

std::int64_t as_count(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) {
    auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) malformed(where, "integer out of range");
    return static_cast<std::int64_t>(u);
  }
  if (j.is_number_integer()) {
    auto i = j.get<std::int64_t>();
    if (i < 0) malformed(where, "expected a non-negative integer");
    return i;
  }
  malformed(where, "expected a non-negative integer");
}

ComponentId as_id(const json& j, const std::string& where) {
  auto id = ComponentId::parse(as_string(j, where));
  if (!id) malformed(where, "invalid component id");
  return *id;
}

std::optional<std::string> as_view(const json& j, const std::string& where) {
  if (j.is_null()) return std::nullopt;
  std::string v = as_string(j, where);
  if (!is_valid_view_name(v)) malformed(where, "invalid view name");
  return v;
}

PropertyValue decode_value(const json& j, const std::string& where) {
  switch (j.type()) {
    case json::value_t::null: return std::monostate{};
    case json::value_t::string: return j.get<std::string>();
    case json::value_t::boolean: return j.get<bool>();
    case json::value_t::number_integer: return j.get<std::int64_t>();
    case json::value_t::number_unsigned: {
      auto u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) malformed(where, "integer out of range");
      return static_cast<std::int64_t>(u);
    }
    case json::value_t::number_float: return j.get<double>();
    case json::value_t::array: {
      TextList out;
      out.reserve(j.size());
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) {
          throw CodecError(CodecError::Code::kUnknownValueTag, where + "/" + std::to_string(i),
                           "lists may only hold text");
        }
        out.push_back(j[i].get<std::string>());
      }
      return out;
    }
    default:
      throw CodecError(CodecError::Code::kUnknownValueTag, where, "unsupported value type");
  }
}

std::string as_property_name(const json& j, const std::string& where) {
  std::string name = as_string(j, where);
  if (!is_property_name(name)) malformed(where, "invalid property name");
  return name;
}

std::string as_event(const json& j, const std::string& where) {
  std::string e = as_string(j, where);
  if (!is_known_event(e)) malformed(where, "unknown event type '" + e + "'");
  return e;
}

EventSet decode_events(const json& j, const std::string& where, const WidgetSpec* widget) {
  if (!j.is_array()) malformed(where, "expected an array");
  EventSet out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string path = where + "/" + std::to_string(i);
    std::string e = as_event(j[i], path);
    if (widget != nullptr && !widget->has_event(e)) malformed(path, std::string(widget->type) + " emits no " + e);
    if (!out.insert(std::move(e)).second) malformed(path, "duplicate event");
  }
  return out;
}

RepresentationalNode decode_node(Fields& f, const std::string& path, std::size_t depth) {
  if (depth > kMaxDepth) malformed(path, "subtree too deep");
  RepresentationalNode node;
  const json& children = f.at("children");
  node.id = as_id(f.at("id"), f.path("id"));
  node.type = as_string(f.at("type"), f.path("type"));
  const WidgetSpec* widget = find_widget(node.type);
  if (widget == nullptr) malformed(f.path("type"), "unknown component type '" + node.type + "'");
  node.listened_events = decode_events(f.at("listened_events"), f.path("listened_events"), widget);

  const json& props = f.at("properties");
  if (!props.is_object()) malformed(f.path("properties"), "expected an object");
  for (auto it = props.begin(); it != props.end(); ++it) {
    std::string where = f.path("properties") + "/" + it.key();
    const PropertySpec* spec = widget->property(it.key());
    if (spec == nullptr) malformed(where, node.type + " has no property '" + it.key() + "'");
    PropertyValue v = decode_value(it.value(), where);
    if (kind_of(v) != spec->kind) malformed(where, "expected " + std::string(to_string(spec->kind)));
    node.properties.emplace(it.key(), std::move(v));
  }
  if (node.properties.size() != widget->properties.size()) malformed(f.path("properties"), "incomplete property set");

  if (!children.is_array()) malformed(f.path("children"), "expected an array");
  if (!widget->container && !children.empty()) malformed(f.path("children"), node.type + " cannot hold children");
  for (std::size_t i = 0; i < children.size(); ++i) {
    std::string child_path = f.path("children") + "/" + std::to_string(i);
    Fields cf(children[i], child_path);
    node.children.push_back(decode_node(cf, child_path, depth + 1));
    cf.finish();
  }
  return node;
}

DeltaDirective decode_directive(const json& j, const std::string& path) {
  Fields f(j, path);
  std::string kind = as_string(f.at("kind"), f.path("kind"));
  if (kind == "create") {
    directive::Create c;
    c.index = static_cast<std::size_t>(as_count(f.at("index"), f.path("index")));
    const json& parent = f.at("parent");
    if (!parent.is_null()) c.parent = as_id(parent, f.path("parent"));
    c.node = decode_node(f, path, 0);
    f.finish();
    return c;
  }
  if (kind == "remove") {
    directive::Remove r{as_id(f.at("id"), f.path("id"))};
    f.finish();
    return r;
  }
  if (kind == "set_property") {
    directive::SetProperty s;
    s.id = as_id(f.at("id"), f.path("id"));
    s.name = as_property_name(f.at("name"), f.path("name"));
    s.value = decode_value(f.at("value"), f.path("value"));
    f.finish();
    return s;
  }
  if (kind == "set_listeners") {
    directive::SetListeners s;
    s.id = as_id(f.at("id"), f.path("id"));
    s.listened_events = decode_events(f.at("listened_events"), f.path("listened_events"), nullptr);
    f.finish();
    return s;
  }
  throw CodecError(CodecError::Code::kUnknownDirectiveKind, f.path("kind"), "unknown directive kind '" + kind + "'");
}

json parse(std::string_view bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    malformed("byte " + std::to_string(e.byte), e.what());
  } catch (const json::exception& e) {
    malformed("/", e.what());
  }
}

void check_version(Fields& f) {
  const json& v = f.at("v");
  if (!v.is_number_integer() || v.get<std::int64_t>() != kProtocolVersion) {
    malformed(f.path("v"), "unsupported protocol version");
  }
}

void check_session(const std::string& session, const std::string& where) {
  if (!is_valid_session_id(session)) malformed(where, "invalid session id");
}

bool has_content(const DeltaClientMessage& m) {
  return m.seq == 0 || !m.state_changes.empty() || m.action.has_value() || m.fragment.has_value();
}

}  // namespace

CodecError::CodecError(Code code, std::string position, std::string reason)
    : Error(position.empty() ? reason : position + ": " + reason),
      code_(code),
      position_(std::move(position)),
      reason_(std::move(reason)) {}

bool is_valid_view_name(std::string_view name) {
  if (name.empty() || name.size() > 128) return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
              c == '.' || c == '_' || c == '~';
    if (!ok) return false;
  }
  return true;
}

bool is_valid_session_id(std::string_view id) {
  if (id.empty()) return true;
  if (id.size() != 32) return false;
  for (char c : id)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  return true;
}

std::string encode_client(const DeltaClientMessage& msg) {
  if (!is_valid_session_id(msg.session)) invalid("invalid session id");
  if (msg.seq < 0) invalid("negative seq");
  if (!has_content(msg)) invalid("request carries no state change, action or fragment");
  check_view(msg.fragment);

  json changes = json::array();
  for (const auto& c : msg.state_changes) {
    if (!is_property_name(c.name)) invalid("invalid property name " + c.name);
    changes.push_back(json{{"id", checked_id(c.id)}, {"name", c.name}, {"value", encode_value(c.value)}});
  }
  json action = nullptr;
  if (msg.action) {
    if (!is_known_event(msg.action->event)) invalid("unknown event " + msg.action->event);
    action = json{{"event", msg.action->event}, {"id", checked_id(msg.action->id)},
                  {"payload", encode_value(msg.action->payload)}};
  }
  json j{{"action", std::move(action)},
         {"fragment", msg.fragment ? json(*msg.fragment) : json(nullptr)},
         {"seq", msg.seq},
         {"session", msg.session},
         {"state_changes", std::move(changes)},
         {"v", kProtocolVersion}};
  return dump(j);
}

DeltaClientMessage decode_client(std::string_view bytes) {
  json j = parse(bytes);
  Fields f(j, "");
  DeltaClientMessage m;

  const json& action = f.at("action");
  if (!action.is_null()) {
    Fields af(action, "/action");
    ClientAction a;
    a.event = as_event(af.at("event"), af.path("event"));
    a.id = as_id(af.at("id"), af.path("id"));
    a.payload = decode_value(af.at("payload"), af.path("payload"));
    af.finish();
    m.action = std::move(a);
  }
  m.fragment = as_view(f.at("fragment"), f.path("fragment"));
  m.seq = as_count(f.at("seq"), f.path("seq"));
  m.session = as_string(f.at("session"), f.path("session"));
  check_session(m.session, f.path("session"));

  const json& changes = f.at("state_changes");
  if (!changes.is_array()) malformed(f.path("state_changes"), "expected an array");
  for (std::size_t i = 0; i < changes.size(); ++i) {
    std::string path = "/state_changes/" + std::to_string(i);
    Fields cf(changes[i], path);
    ClientStateChange c;
    c.id = as_id(cf.at("id"), cf.path("id"));
    c.name = as_property_name(cf.at("name"), cf.path("name"));
    c.value = decode_value(cf.at("value"), cf.path("value"));
    cf.finish();
    m.state_changes.push_back(std::move(c));
  }
  check_version(f);
  f.finish();
  if (!has_content(m)) malformed("/", "request carries no state change, action or fragment");
  return m;
}

std::string encode_server(const DeltaServerMessage& msg) {
  if (!is_valid_session_id(msg.session)) invalid("invalid session id");
  if (msg.ack < 0) invalid("negative ack");
  check_view(msg.fragment);
  json directives = json::array();
  for (const auto& d : msg.directives) directives.push_back(encode_directive(d));
  json j{{"ack", msg.ack},
         {"directives", std::move(directives)},
         {"fragment", msg.fragment ? json(*msg.fragment) : json(nullptr)},
         {"session", msg.session},
         {"v", kProtocolVersion}};
  return dump(j);
}

DeltaServerMessage decode_server(std::string_view bytes) {
  json j = parse(bytes);
  Fields f(j, "");
  DeltaServerMessage m;
  m.ack = as_count(f.at("ack"), f.path("ack"));
  const json& directives = f.at("directives");
  if (!directives.is_array()) malformed(f.path("directives"), "expected an array");
  for (std::size_t i = 0; i < directives.size(); ++i) {
    m.directives.push_back(decode_directive(directives[i], "/directives/" + std::to_string(i)));
  }
  m.fragment = as_view(f.at("fragment"), f.path("fragment"));
  m.session = as_string(f.at("session"), f.path("session"));
  check_session(m.session, f.path("session"));
  check_version(f);
  f.finish();
  return m;
}

std::string encode_error(std::string_view error, const std::vector<std::pair<std::string, PropertyValue>>& fields) {
  json j = json::object();
  j["error"] = std::string(error);
  for (const auto& [key, value] : fields) j[key] = encode_value(value);
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace spiar
