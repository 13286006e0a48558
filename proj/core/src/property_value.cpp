// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/property_value.hpp"

#include <sstream>

namespace spiar {

std::string_view to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::kNull: return "null";
    case ValueKind::kText: return "text";
    case ValueKind::kInteger: return "integer";
    case ValueKind::kReal: return "real";
    case ValueKind::kBoolean: return "boolean";
    case ValueKind::kTextList: return "list-of-text";
  }
  return "?";
}

namespace {

void quote(std::ostringstream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    if (c == '"' || c == '\\') os << '\\';
    if (c == '\n') {
      os << "\\n";
      continue;
    }
    os << c;
  }
  os << '"';
}

}  // namespace

std::string describe(const PropertyValue& v) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          os << "null";
        } else if constexpr (std::is_same_v<T, std::string>) {
          quote(os, x);
        } else if constexpr (std::is_same_v<T, bool>) {
          os << (x ? "true" : "false");
        } else if constexpr (std::is_same_v<T, TextList>) {
          os << '[';
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) os << ',';
            quote(os, x[i]);
          }
          os << ']';
        } else {
          os << x;
        }
      },
      v);
  return os.str();
}

}  // namespace spiar
