// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spiar/property_value.hpp"

namespace spiar {

namespace events {
inline constexpr std::string_view kAction = "action";
inline constexpr std::string_view kValueChange = "value-change";
}  // namespace events

struct PropertySpec {
  std::string_view name;
  ValueKind kind;
  PropertyValue default_value;
};

/// Static description of one built-in component type.
struct WidgetSpec {
  std::string_view type;
  bool container = false;
  std::vector<PropertySpec> properties;
  std::vector<std::string_view> events;
  /// Properties a client may write through a DELTA-CLIENT state change.
  std::vector<std::string_view> client_writable;
  /// Property carried by a value-change payload, if the type has one.
  std::optional<std::string_view> value_property;

  const PropertySpec* property(std::string_view name) const;
  bool has_event(std::string_view event) const;
  bool client_may_write(std::string_view name) const;
  PropertyMap defaults() const;
};

/// nullptr for unknown types.
const WidgetSpec* find_widget(std::string_view type);
std::span<const WidgetSpec> widget_table();

/// True for any event name that some built-in type can emit.
bool is_known_event(std::string_view event);

}  // namespace spiar
