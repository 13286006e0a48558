// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/widgets.hpp"

#include <algorithm>

namespace spiar {

namespace {

const std::vector<WidgetSpec>& table() {
  static const std::vector<WidgetSpec> kTable = {
      {"window", true, {}, {}, {}, std::nullopt},
      {"panel", true, {{"style", ValueKind::kText, std::string{}}}, {}, {}, std::nullopt},
      {"label", false, {{"text", ValueKind::kText, std::string{}}}, {}, {}, std::nullopt},
      {"button",
       false,
       {{"text", ValueKind::kText, std::string{}}, {"enabled", ValueKind::kBoolean, true}},
       {events::kAction},
       {},
       std::nullopt},
      // style carries the client-side validation state.
      {"textfield",
       false,
       {{"value", ValueKind::kText, std::string{}},
        {"enabled", ValueKind::kBoolean, true},
        {"style", ValueKind::kText, std::string{}}},
       {events::kValueChange, events::kAction},
       {"value", "style"},
       "value"},
      {"checkbox",
       false,
       {{"checked", ValueKind::kBoolean, false}, {"text", ValueKind::kText, std::string{}}},
       {events::kValueChange},
       {"checked"},
       "checked"},
      {"listbox",
       false,
       {{"items", ValueKind::kTextList, TextList{}},
        {"selected-index", ValueKind::kInteger, std::int64_t{-1}}},
       {events::kValueChange},
       {"selected-index"},
       "selected-index"},
  };
  return kTable;
}

}  // namespace

const PropertySpec* WidgetSpec::property(std::string_view name) const {
  auto it = std::find_if(properties.begin(), properties.end(),
                         [name](const PropertySpec& p) { return p.name == name; });
  return it == properties.end() ? nullptr : &*it;
}

bool WidgetSpec::has_event(std::string_view event) const {
  return std::find(events.begin(), events.end(), event) != events.end();
}

bool WidgetSpec::client_may_write(std::string_view name) const {
  return std::find(client_writable.begin(), client_writable.end(), name) != client_writable.end();
}

PropertyMap WidgetSpec::defaults() const {
  PropertyMap out;
  for (const auto& p : properties) out.emplace(std::string(p.name), p.default_value);
  return out;
}

const WidgetSpec* find_widget(std::string_view type) {
  for (const auto& w : table())
    if (w.type == type) return &w;
  return nullptr;
}

std::span<const WidgetSpec> widget_table() { return table(); }

bool is_known_event(std::string_view event) {
  return event == events::kAction || event == events::kValueChange;
}

}  // namespace spiar
