// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/client_engine.hpp"

#include <algorithm>
#include <set>

#include "spiar/widgets.hpp"

namespace spiar {

namespace {

void validate_textfield(ClientEngine& engine, const UserEvent& ev) {
  const auto* node = engine.model().find(ev.target);
  const auto& value = std::get<std::string>(node->properties.at("value"));
  std::string style = value.empty() ? "error" : "";
  if (std::get<std::string>(node->properties.at("style")) != style) engine.write_local(ev.target, "style", style);
}

void toggle_checkbox(ClientEngine& engine, const UserEvent& ev) {
  if (!std::holds_alternative<std::monostate>(ev.payload)) return;
  bool checked = std::get<bool>(engine.model().find(ev.target)->properties.at("checked"));
  engine.write_local(ev.target, "checked", !checked);
}

}  // namespace

ClientEngine ClientEngine::bootstrap(const DeltaServerMessage& response) {
  if (response.ack != 0) {
    throw EngineError(EngineError::Code::kNotBootstrap, "bootstrap response must answer seq 0, got ack " +
                                                            std::to_string(response.ack));
  }
  ClientEngine engine;
  try {
    engine.model_.apply_all(response.directives);
  } catch (const DirectiveError& e) {
    throw EngineError(EngineError::Code::kMalformedDirective, e.what());
  }
  engine.session_ = response.session;
  engine.fragment_ = response.fragment.value_or("");
  engine.set_handler("textfield", std::string(events::kValueChange), validate_textfield);
  engine.set_handler("checkbox", std::string(events::kValueChange), toggle_checkbox);
  return engine;
}

void ClientEngine::set_handler(std::string type, std::string event, ClientHandler handler) {
  handlers_[{std::move(type), std::move(event)}] = std::move(handler);
}

void ClientEngine::write_local(const ComponentId& id, const std::string& name, PropertyValue value) {
  RepresentationalNode* node = model_.find(id);
  if (node == nullptr) throw EngineError(EngineError::Code::kUnknownComponent, "unknown component " + id.str());
  node->properties.insert_or_assign(name, value);
  auto it = std::find_if(pending_.begin(), pending_.end(), [&](const auto& c) { return c.id == id && c.name == name; });
  if (it != pending_.end()) {
    it->value = std::move(value);
  } else {
    pending_.push_back({id, name, std::move(value)});
  }
}

std::optional<DeltaClientMessage> ClientEngine::simulate_event(const UserEvent& ev) {
  const RepresentationalNode* node = model_.find(ev.target);
  if (node == nullptr) throw EngineError(EngineError::Code::kUnknownComponent, "unknown component " + ev.target.str());
  const WidgetSpec* widget = find_widget(node->type);
  if (!widget->has_event(ev.event)) return std::nullopt;

  const bool listened = node->listened_events.contains(ev.event);
  if (listened && in_flight()) {
    throw EngineError(EngineError::Code::kBusy, "a request is already outstanding");
  }

  if (ev.event == events::kValueChange && widget->value_property &&
      !std::holds_alternative<std::monostate>(ev.payload)) {
    const PropertySpec* spec = widget->property(*widget->value_property);
    if (kind_of(ev.payload) != spec->kind) {
      throw EngineError(EngineError::Code::kInvalidPayload, std::string(widget->type) + " value-change expects " +
                                                                std::string(to_string(spec->kind)));
    }
    write_local(ev.target, std::string(*widget->value_property), ev.payload);
  }

  if (listened) return send(ClientAction{ev.target, ev.event, ev.payload}, std::nullopt);

  auto handler = handlers_.find({node->type, ev.event});
  if (handler != handlers_.end()) handler->second(*this, ev);
  return std::nullopt;
}

DeltaClientMessage ClientEngine::navigate(const std::string& view) {
  if (in_flight()) throw EngineError(EngineError::Code::kBusy, "a request is already outstanding");
  return send(std::nullopt, view);
}

DeltaClientMessage ClientEngine::send(std::optional<ClientAction> action, std::optional<std::string> fragment) {
  DeltaClientMessage msg{session_, next_seq_, std::move(pending_), std::move(action), std::move(fragment)};
  pending_.clear();
  in_flight_ = next_seq_;
  ++messages_sent_;
  return msg;
}

void ClientEngine::apply_server_delta(const DeltaServerMessage& response) {
  if (!in_flight_ || response.ack != *in_flight_ || response.session != session_) {
    throw EngineError(EngineError::Code::kAckMismatch,
                      "response ack " + std::to_string(response.ack) + " does not answer the outstanding request");
  }
  try {
    model_.apply_all(response.directives);
  } catch (const DirectiveError& e) {
    throw EngineError(e.code() == DirectiveError::Code::kUnknownComponent ? EngineError::Code::kUnknownComponent
                                                                          : EngineError::Code::kMalformedDirective,
                      e.what());
  }

  // Writes made locally while the request was in flight survive unless the
  // server overwrote or removed their target.
  std::set<std::pair<ComponentId, std::string>> overwritten;
  for (const auto& d : response.directives)
    if (const auto* set = std::get_if<directive::SetProperty>(&d)) overwritten.emplace(set->id, set->name);
  std::erase_if(pending_, [&](const ClientStateChange& c) {
    return !model_.contains(c.id) || overwritten.contains({c.id, c.name});
  });

  in_flight_.reset();
  ++next_seq_;
  fragment_ = response.fragment.value_or("");
}

}  // namespace spiar
