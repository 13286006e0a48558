// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/representational_model.hpp"

#include <algorithm>
#include <unordered_set>

#include "spiar/widgets.hpp"

namespace spiar {

namespace {

template <typename Node>
Node* find_in(Node& node, const ComponentId& id) {
  if (node.id == id) return &node;
  for (auto& child : node.children)
    if (auto* hit = find_in(child, id)) return hit;
  return nullptr;
}

RepresentationalNode* find_parent(RepresentationalNode& node, const ComponentId& id) {
  for (auto& child : node.children) {
    if (child.id == id) return &node;
    if (auto* hit = find_parent(child, id)) return hit;
  }
  return nullptr;
}

void check_schema(const RepresentationalNode& node, std::unordered_set<ComponentId>& seen,
                  const RepresentationalModel& model) {
  const WidgetSpec* widget = find_widget(node.type);
  if (widget == nullptr) throw DirectiveError(DirectiveError::Code::kSchema, "unknown type " + node.type);
  if (!seen.insert(node.id).second || model.contains(node.id)) {
    throw DirectiveError(DirectiveError::Code::kDuplicateId, "duplicate id " + node.id.str());
  }
  if (node.properties.size() != widget->properties.size()) {
    throw DirectiveError(DirectiveError::Code::kSchema, node.id.str() + " does not carry the full property set");
  }
  for (const auto& [name, value] : node.properties) {
    const PropertySpec* p = widget->property(name);
    if (p == nullptr || p->kind != kind_of(value)) {
      throw DirectiveError(DirectiveError::Code::kSchema, node.id.str() + ": bad property " + name);
    }
  }
  for (const auto& e : node.listened_events)
    if (!widget->has_event(e)) throw DirectiveError(DirectiveError::Code::kSchema, node.id.str() + ": bad event " + e);
  if (!widget->container && !node.children.empty()) {
    throw DirectiveError(DirectiveError::Code::kSchema, node.id.str() + " is not a container");
  }
  for (const auto& child : node.children) check_schema(child, seen, model);
}

}  // namespace

std::size_t RepresentationalNode::size() const {
  std::size_t n = 1;
  for (const auto& child : children) n += child.size();
  return n;
}

const ComponentId& target_of(const DeltaDirective& d) {
  return std::visit(
      [](const auto& x) -> const ComponentId& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, directive::Create>) {
          return x.node.id;
        } else {
          return x.id;
        }
      },
      d);
}

const RepresentationalNode& RepresentationalModel::root() const {
  if (!root_) throw DirectiveError(DirectiveError::Code::kEmptyModel, "model is empty");
  return *root_;
}

const RepresentationalNode* RepresentationalModel::find(const ComponentId& id) const {
  return root_ ? find_in(*root_, id) : nullptr;
}

RepresentationalNode* RepresentationalModel::find(const ComponentId& id) {
  return root_ ? find_in(*root_, id) : nullptr;
}

void RepresentationalModel::apply(const DeltaDirective& d) {
  using Code = DirectiveError::Code;
  auto unknown = [](const ComponentId& id) { return DirectiveError(Code::kUnknownComponent, "unknown component " + id.str()); };

  if (const auto* create = std::get_if<directive::Create>(&d)) {
    std::unordered_set<ComponentId> seen;
    check_schema(create->node, seen, *this);
    if (!create->parent) {
      if (root_) throw DirectiveError(Code::kNotEmpty, "root create on a non-empty model");
      if (create->node.type != "window") throw DirectiveError(Code::kSchema, "root must be a window");
      root_ = create->node;
      return;
    }
    RepresentationalNode* parent = find(*create->parent);
    if (parent == nullptr) throw unknown(*create->parent);
    if (!find_widget(parent->type)->container) throw DirectiveError(Code::kSchema, parent->id.str() + " is not a container");
    if (create->index > parent->children.size()) {
      throw DirectiveError(Code::kIndexOutOfRange, "create index " + std::to_string(create->index) + " past end of " +
                                                       parent->id.str());
    }
    parent->children.insert(parent->children.begin() + static_cast<std::ptrdiff_t>(create->index), create->node);
  } else if (const auto* remove = std::get_if<directive::Remove>(&d)) {
    if (root_ && root_->id == remove->id) throw DirectiveError(Code::kCannotRemoveRoot, "cannot remove the root");
    RepresentationalNode* parent = root_ ? find_parent(*root_, remove->id) : nullptr;
    if (parent == nullptr) throw unknown(remove->id);
    auto& kids = parent->children;
    kids.erase(std::find_if(kids.begin(), kids.end(), [&](const auto& n) { return n.id == remove->id; }));
  } else if (const auto* set = std::get_if<directive::SetProperty>(&d)) {
    RepresentationalNode* node = find(set->id);
    if (node == nullptr) throw unknown(set->id);
    const PropertySpec* p = find_widget(node->type)->property(set->name);
    if (p == nullptr || p->kind != kind_of(set->value)) {
      throw DirectiveError(Code::kSchema, set->id.str() + ": bad property write " + set->name);
    }
    node->properties.insert_or_assign(set->name, set->value);
  } else {
    const auto& listeners = std::get<directive::SetListeners>(d);
    RepresentationalNode* node = find(listeners.id);
    if (node == nullptr) throw unknown(listeners.id);
    const WidgetSpec* widget = find_widget(node->type);
    for (const auto& e : listeners.listened_events)
      if (!widget->has_event(e)) throw DirectiveError(Code::kSchema, listeners.id.str() + ": bad event " + e);
    node->listened_events = listeners.listened_events;
  }
}

void RepresentationalModel::apply_all(const std::vector<DeltaDirective>& ds) {
  RepresentationalModel scratch = *this;
  for (const auto& d : ds) scratch.apply(d);
  *this = std::move(scratch);
}

}  // namespace spiar
