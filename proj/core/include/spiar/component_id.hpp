// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace spiar {

/// Server-issued component identifier of the form `c<positive integer>`.
class ComponentId {
 public:
  ComponentId() = default;

  static ComponentId from_number(std::uint64_t n);
  /// Returns nullopt unless `text` is `c` followed by a positive decimal without
  /// leading zeros.
  static std::optional<ComponentId> parse(std::string_view text);

  const std::string& str() const { return value_; }
  std::uint64_t number() const;
  bool empty() const { return value_.empty(); }

  friend bool operator==(const ComponentId&, const ComponentId&) = default;
  friend auto operator<=>(const ComponentId&, const ComponentId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const ComponentId& id) {
    return os << id.value_;
  }

 private:
  explicit ComponentId(std::string v) : value_(std::move(v)) {}
  std::string value_;
};

}  // namespace spiar

template <>
struct std::hash<spiar::ComponentId> {
  std::size_t operator()(const spiar::ComponentId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
