// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/component_id.hpp"

#include <charconv>

namespace spiar {

ComponentId ComponentId::from_number(std::uint64_t n) { return ComponentId("c" + std::to_string(n)); }

std::optional<ComponentId> ComponentId::parse(std::string_view text) {
  if (text.size() < 2 || text.size() > 21 || text[0] != 'c' || text[1] == '0') return std::nullopt;
  std::uint64_t n = 0;
  auto digits = text.substr(1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || n == 0) return std::nullopt;
  return ComponentId(std::string(text));
}

std::uint64_t ComponentId::number() const {
  std::uint64_t n = 0;
  if (value_.size() > 1) std::from_chars(value_.data() + 1, value_.data() + value_.size(), n);
  return n;
}

}  // namespace spiar
