// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/session_runtime.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace spiar {

namespace {

std::string random_session_id() {
  std::random_device rd;
  std::string out;
  out.reserve(32);
  for (int i = 0; i < 4; ++i) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
    out += buf;
  }
  return out;
}

}  // namespace

void ApplicationDefinition::validate() const {
  if (!init) throw std::invalid_argument("application has no init procedure");
  for (const auto& [name, view] : views) {
    if (!is_valid_view_name(name)) throw std::invalid_argument("view name '" + name + "' is not a valid URI fragment");
    if (!view) throw std::invalid_argument("view '" + name + "' has no procedure");
  }
}

SessionError SessionError::out_of_order(std::int64_t expected, std::int64_t got) {
  SessionError e(Code::kOutOfOrder,
                 "out of order: expected seq " + std::to_string(expected) + ", got " + std::to_string(got));
  e.expected_ = expected;
  e.got_ = got;
  return e;
}

struct SessionRuntime::Slot {
  std::mutex mutex;
  Session session;
  bool expired = false;
  std::chrono::steady_clock::time_point last_used;
};

SessionRuntime::SessionRuntime(ApplicationDefinition app, SessionOptions options)
    : app_(std::move(app)), options_(std::move(options)) {
  app_.validate();
  if (!options_.id_generator) options_.id_generator = random_session_id;
  if (!options_.clock) options_.clock = [] { return std::chrono::steady_clock::now(); };
}

SessionRuntime::~SessionRuntime() = default;

std::pair<std::string, DeltaServerMessage> SessionRuntime::create_session(const std::optional<std::string>& fragment) {
  const ViewProcedure* view = nullptr;
  if (fragment) {
    auto it = app_.views.find(*fragment);
    if (it == app_.views.end()) throw SessionError(SessionError::Code::kUnknownView, "unknown view '" + *fragment + "'");
    view = &it->second;
  }

  auto slot = std::make_shared<Slot>();
  Session& s = slot->session;
  app_.init(s.tree);
  if (view) {
    (*view)(s.tree);
    s.current_view = *fragment;
  }

  {
    std::lock_guard id_lock(id_mutex_);
    std::unique_lock lock(sessions_mutex_);
    do {
      s.id = options_.id_generator();
    } while (sessions_.contains(s.id));
    s.expected_seq = 1;
    s.last_response = DeltaServerMessage{
        s.id, 0, {directive::Create{std::nullopt, 0, s.tree.render_node(s.tree.root())}},
        s.current_view.empty() ? std::nullopt : std::optional<std::string>(s.current_view)};
    slot->last_used = options_.clock();
    sessions_.emplace(s.id, slot);
  }
  return {s.id, s.last_response};
}

std::shared_ptr<SessionRuntime::Slot> SessionRuntime::find(const std::string& session_id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw SessionError(SessionError::Code::kUnknownSession, "unknown session");
  return it->second;
}

DeltaServerMessage SessionRuntime::process(const std::string& session_id, const DeltaClientMessage& msg,
                                           const CommitHook& committed) {
  auto slot = find(session_id);
  bool idled_out = false;
  {
    std::lock_guard lock(slot->mutex);
    if (!slot->expired) {
      auto now = options_.clock();
      if (options_.idle_timeout && now - slot->last_used > *options_.idle_timeout) {
        slot->expired = true;
        idled_out = true;
      } else {
        slot->last_used = now;
        Session& s = slot->session;
        if (msg.session != s.id) {
          throw SessionError(SessionError::Code::kMalformedMessage, "message addressed to another session");
        }
        if (msg.seq != s.expected_seq - 1) {
          if (msg.seq != s.expected_seq) throw SessionError::out_of_order(s.expected_seq, msg.seq);
          validate_request(s, msg);
          run_pipeline(s, msg);
        }
        if (committed) committed(s.last_response);
        return s.last_response;
      }
    }
  }
  if (idled_out) {
    std::unique_lock lock(sessions_mutex_);
    auto it = sessions_.find(session_id);
    if (it != sessions_.end() && it->second == slot) sessions_.erase(it);
  }
  throw SessionError(SessionError::Code::kUnknownSession, "unknown session");
}

void SessionRuntime::validate_request(const Session& s, const DeltaClientMessage& msg) const {
  using Code = SessionError::Code;
  for (const auto& c : msg.state_changes) {
    if (!s.tree.contains(c.id)) throw SessionError(Code::kUnknownComponent, "unknown component " + c.id.str());
    const WidgetSpec* widget = s.tree.get(c.id).widget;
    if (!widget->client_may_write(c.name)) {
      throw SessionError(Code::kMalformedMessage,
                         "client may not write " + std::string(widget->type) + "." + c.name);
    }
    if (widget->property(c.name)->kind != kind_of(c.value)) {
      throw SessionError(Code::kMalformedMessage, "type mismatch writing " + c.id.str() + "." + c.name);
    }
  }
  if (msg.fragment && !app_.views.contains(*msg.fragment)) {
    throw SessionError(Code::kUnknownView, "unknown view '" + *msg.fragment + "'");
  }
  if (msg.action) {
    if (!s.tree.contains(msg.action->id)) {
      throw SessionError(Code::kUnknownComponent, "unknown component " + msg.action->id.str());
    }
    const WidgetSpec* widget = s.tree.get(msg.action->id).widget;
    if (!widget->has_event(msg.action->event)) {
      throw SessionError(Code::kUnknownEvent, std::string(widget->type) + " emits no " + msg.action->event + " events");
    }
  }
}

void SessionRuntime::run_pipeline(Session& s, const DeltaClientMessage& msg) {
  // Client writes are applied unrecorded.
  std::vector<std::pair<ComponentId, PropertyValue>> changed;
  for (const auto& c : msg.state_changes) {
    s.tree.set_property(c.id, c.name, c.value);
    auto it = std::find_if(changed.begin(), changed.end(), [&](const auto& e) { return e.first == c.id; });
    if (it == changed.end()) it = changed.insert(changed.end(), {c.id, std::monostate{}});
    if (s.tree.get(c.id).widget->value_property == c.name) it->second = c.value;
  }

  std::vector<DeltaDirective> directives;
  {
    RecordingScope recording(s.tree, s.log);
    const bool action_is_change = msg.action && msg.action->event == events::kValueChange;
    for (const auto& [id, value] : changed) {
      if (action_is_change && msg.action->id == id) continue;  // fired once, as the action
      if (s.tree.contains(id)) s.tree.fire(id, Event{id, std::string(events::kValueChange), value});
    }
    if (msg.fragment) {
      app_.views.find(*msg.fragment)->second(s.tree);
      s.current_view = *msg.fragment;
    }
    if (msg.action && s.tree.contains(msg.action->id)) {
      s.tree.fire(msg.action->id, Event{msg.action->id, msg.action->event, msg.action->payload});
    }
    directives = s.log.drain(s.tree);
  }

  s.last_response = DeltaServerMessage{
      s.id, msg.seq, std::move(directives),
      s.current_view.empty() ? std::nullopt : std::optional<std::string>(s.current_view)};
  s.expected_seq = msg.seq + 1;
  processed_.fetch_add(1, std::memory_order_relaxed);
}

void SessionRuntime::expire_session(const std::string& session_id) {
  std::shared_ptr<Slot> slot;
  {
    std::unique_lock lock(sessions_mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw SessionError(SessionError::Code::kUnknownSession, "unknown session");
    slot = std::move(it->second);
    sessions_.erase(it);
  }
  std::lock_guard lock(slot->mutex);
  slot->expired = true;
}

std::size_t SessionRuntime::expire_idle() {
  if (!options_.idle_timeout) return 0;
  std::vector<std::pair<std::string, std::shared_ptr<Slot>>> candidates;
  {
    std::shared_lock lock(sessions_mutex_);
    candidates.assign(sessions_.begin(), sessions_.end());
  }
  auto now = options_.clock();
  std::vector<std::pair<std::string, std::shared_ptr<Slot>>> idle;
  for (auto& [id, slot] : candidates) {
    std::lock_guard lock(slot->mutex);
    if (!slot->expired && now - slot->last_used > *options_.idle_timeout) {
      slot->expired = true;
      idle.emplace_back(id, slot);
    }
  }
  std::unique_lock lock(sessions_mutex_);
  for (const auto& [id, slot] : idle) {
    auto it = sessions_.find(id);
    if (it != sessions_.end() && it->second == slot) sessions_.erase(it);
  }
  return idle.size();
}

std::size_t SessionRuntime::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::uint64_t SessionRuntime::processed_count() const { return processed_.load(std::memory_order_relaxed); }

void SessionRuntime::inspect(const std::string& session_id, const std::function<void(const Session&)>& fn) const {
  auto slot = find(session_id);
  std::lock_guard lock(slot->mutex);
  if (slot->expired) throw SessionError(SessionError::Code::kUnknownSession, "unknown session");
  fn(slot->session);
}

RepresentationalModel SessionRuntime::render(const std::string& session_id) const {
  RepresentationalModel out;
  inspect(session_id, [&](const Session& s) { out = s.tree.render_full(); });
  return out;
}

}  // namespace spiar
