// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spiar {

using TextList = std::vector<std::string>;

/// Value of a component property. Index order is part of the API: it is the
/// order of ValueKind.
using PropertyValue =
    std::variant<std::monostate, std::string, std::int64_t, double, bool, TextList>;

enum class ValueKind { kNull, kText, kInteger, kReal, kBoolean, kTextList };

inline ValueKind kind_of(const PropertyValue& v) { return static_cast<ValueKind>(v.index()); }

std::string_view to_string(ValueKind kind);

/// Sorted, so iteration order is canonical.
using PropertyMap = std::map<std::string, PropertyValue, std::less<>>;

/// Short human-readable rendering used by the inspector ("hi", 3, true, ["a","b"]).
std::string describe(const PropertyValue& v);

}  // namespace spiar
