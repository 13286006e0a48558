// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "spiar/component_id.hpp"
#include "spiar/error.hpp"
#include "spiar/property_value.hpp"

namespace spiar {

using EventSet = std::set<std::string, std::less<>>;

/// Client-side mirror of one component.
struct RepresentationalNode {
  ComponentId id;
  std::string type;
  PropertyMap properties;
  EventSet listened_events;
  std::vector<RepresentationalNode> children;

  friend bool operator==(const RepresentationalNode&, const RepresentationalNode&) = default;

  std::size_t size() const;
};

namespace directive {

/// Inserts `node` with its whole subtree. A missing parent means the node
/// becomes the root of an empty model.
struct Create {
  std::optional<ComponentId> parent;
  std::size_t index = 0;
  RepresentationalNode node;
  friend bool operator==(const Create&, const Create&) = default;
};
struct Remove {
  ComponentId id;
  friend bool operator==(const Remove&, const Remove&) = default;
};
struct SetProperty {
  ComponentId id;
  std::string name;
  PropertyValue value;
  friend bool operator==(const SetProperty&, const SetProperty&) = default;
};
struct SetListeners {
  ComponentId id;
  EventSet listened_events;
  friend bool operator==(const SetListeners&, const SetListeners&) = default;
};

}  // namespace directive

using DeltaDirective = std::variant<directive::Create, directive::Remove,
                                    directive::SetProperty, directive::SetListeners>;

const ComponentId& target_of(const DeltaDirective& d);

class DirectiveError : public Error {
 public:
  enum class Code { kUnknownComponent, kDuplicateId, kIndexOutOfRange, kNotEmpty,
                    kCannotRemoveRoot, kEmptyModel, kSchema };
  DirectiveError(Code code, const std::string& what) : Error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// The run-time tree the client engine manipulates. Possibly empty (before
/// bootstrap).
class RepresentationalModel {
 public:
  RepresentationalModel() = default;
  explicit RepresentationalModel(RepresentationalNode root) : root_(std::move(root)) {}

  bool empty() const { return !root_.has_value(); }
  const RepresentationalNode& root() const;
  std::size_t size() const { return root_ ? root_->size() : 0; }

  const RepresentationalNode* find(const ComponentId& id) const;
  RepresentationalNode* find(const ComponentId& id);
  bool contains(const ComponentId& id) const { return find(id) != nullptr; }

  /// Applies one directive in place. Throws DirectiveError; on throw the
  /// model is unchanged.
  void apply(const DeltaDirective& d);
  /// All-or-nothing application of a directive list.
  void apply_all(const std::vector<DeltaDirective>& ds);

  friend bool operator==(const RepresentationalModel&, const RepresentationalModel&) = default;

 private:
  std::optional<RepresentationalNode> root_;
};

}  // namespace spiar
