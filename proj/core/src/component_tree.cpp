// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/component_tree.hpp"

#include <algorithm>

namespace spiar {

EventSet Component::listened_events() const {
  EventSet out;
  for (const auto& [event, list] : listeners)
    if (!list.empty()) out.insert(event);
  return out;
}

ComponentTree::ComponentTree() {
  root_ = ComponentId::from_number(next_number_++);
  Component root;
  root.id = root_;
  root.widget = find_widget("window");
  root.properties = root.widget->defaults();
  root.in_tree = true;
  components_.emplace(root_, std::move(root));
  reachable_count_ = 1;
}

const Component& ComponentTree::get(const ComponentId& id) const {
  auto it = components_.find(id);
  if (it == components_.end()) throw TreeError(TreeError::Code::kUnknownId, "unknown component " + id.str());
  return it->second;
}

Component& ComponentTree::mutable_get(const ComponentId& id) {
  return const_cast<Component&>(std::as_const(*this).get(id));
}

bool ComponentTree::contains(const ComponentId& id) const {
  auto it = components_.find(id);
  return it != components_.end() && it->second.in_tree;
}

void ComponentTree::check_value(const Component& c, std::string_view name,
                                const PropertyValue& value) const {
  const PropertySpec* spec = c.widget->property(name);
  if (spec == nullptr) {
    throw TreeError(TreeError::Code::kUnknownProperty,
                    std::string(c.type()) + " has no property " + std::string(name));
  }
  if (kind_of(value) != spec->kind) {
    throw TreeError(TreeError::Code::kPropertyTypeMismatch,
                    std::string(c.type()) + "." + std::string(name) + " expects " +
                        std::string(to_string(spec->kind)) + ", got " +
                        std::string(to_string(kind_of(value))));
  }
}

ComponentId ComponentTree::create_component(std::string_view type, const PropertyMap& properties) {
  const WidgetSpec* widget = find_widget(type);
  if (widget == nullptr) throw TreeError(TreeError::Code::kUnknownType, "unknown component type " + std::string(type));
  if (widget->type == "window") {
    throw TreeError(TreeError::Code::kRootTypeReserved, "window is reserved for the root");
  }
  Component c;
  c.widget = widget;
  for (const auto& [name, value] : properties) check_value(c, name, value);
  c.properties = widget->defaults();
  for (const auto& [name, value] : properties) c.properties.insert_or_assign(name, value);
  c.id = ComponentId::from_number(next_number_++);
  ComponentId id = c.id;
  components_.emplace(id, std::move(c));
  return id;
}

void ComponentTree::attach(ComponentId parent, ComponentId child, std::size_t index) {
  Component& p = mutable_get(parent);
  Component& c = mutable_get(child);
  if (!p.widget->container) {
    throw TreeError(TreeError::Code::kNotAContainer, std::string(p.type()) + " " + parent.str() + " cannot hold children");
  }
  if (c.parent.has_value() || child == root_) {
    throw TreeError(TreeError::Code::kNotDetached, child.str() + " is already attached");
  }
  if (index > p.children.size()) {
    throw TreeError(TreeError::Code::kIndexOutOfRange,
                    "index " + std::to_string(index) + " outside [0, " + std::to_string(p.children.size()) + "]");
  }
  for (const Component* up = &p;;) {
    if (up->id == child) throw TreeError(TreeError::Code::kCycle, "attaching " + child.str() + " under itself");
    if (!up->parent) break;
    up = &get(*up->parent);
  }

  p.children.insert(p.children.begin() + static_cast<std::ptrdiff_t>(index), child);
  c.parent = parent;
  if (!p.in_tree) return;

  std::vector<ComponentId> ids = subtree(child);
  for (const auto& id : ids) mutable_get(id).in_tree = true;
  reachable_count_ += ids.size();
  if (recorder_) recorder_->record(change::ChildAttached{parent, child, index, std::move(ids)});
}

void ComponentTree::append(ComponentId parent, ComponentId child) {
  std::size_t end = get(parent).children.size();
  attach(std::move(parent), std::move(child), end);
}

void ComponentTree::detach(ComponentId id) {
  const Component& c = get(id);
  if (id == root_) throw TreeError(TreeError::Code::kCannotDetachRoot, "the root cannot be detached");
  const bool reachable = c.in_tree;
  const std::optional<ComponentId> parent = c.parent;
  if (reachable && recorder_) recorder_->before_removal(*this);

  std::vector<ComponentId> ids = subtree(id);
  if (parent) {
    auto& siblings = mutable_get(*parent).children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), id));
  }
  for (const auto& gone : ids) components_.erase(gone);
  if (!reachable) return;

  reachable_count_ -= ids.size();
  if (recorder_) recorder_->record(change::ChildDetached{id, *parent, std::move(ids)});
}

void ComponentTree::set_property(const ComponentId& id, std::string_view name, PropertyValue value) {
  Component& c = mutable_get(id);
  check_value(c, name, value);
  c.properties.insert_or_assign(std::string(name), value);
  if (c.in_tree && recorder_) recorder_->record(change::PropertySet{id, std::string(name), std::move(value)});
}

const PropertyValue& ComponentTree::property(const ComponentId& id, std::string_view name) const {
  const Component& c = get(id);
  auto it = c.properties.find(name);
  if (it == c.properties.end()) {
    throw TreeError(TreeError::Code::kUnknownProperty, std::string(c.type()) + " has no property " + std::string(name));
  }
  return it->second;
}

void ComponentTree::notify_listeners_changed(const Component& c) {
  if (c.in_tree && recorder_) recorder_->record(change::ListenersChanged{c.id, c.listened_events()});
}

ListenerHandle ComponentTree::add_listener(const ComponentId& id, std::string_view event, Listener listener) {
  Component& c = mutable_get(id);
  if (!c.widget->has_event(event)) {
    throw TreeError(TreeError::Code::kUnknownEventType,
                    std::string(c.type()) + " emits no " + std::string(event) + " events");
  }
  auto& list = c.listeners[std::string(event)];
  const bool was_listened = !list.empty();
  ListenerHandle handle{id, std::string(event), next_listener_serial_++};
  list.emplace_back(handle.serial, std::move(listener));
  if (!was_listened) notify_listeners_changed(c);
  return handle;
}

bool ComponentTree::remove_listener(const ListenerHandle& handle) {
  auto it = components_.find(handle.component);
  if (it == components_.end()) return false;
  Component& c = it->second;
  auto lit = c.listeners.find(handle.event);
  if (lit == c.listeners.end()) return false;
  auto& list = lit->second;
  auto pos = std::find_if(list.begin(), list.end(), [&](const auto& e) { return e.first == handle.serial; });
  if (pos == list.end()) return false;
  list.erase(pos);
  if (list.empty()) {
    c.listeners.erase(lit);
    notify_listeners_changed(c);
  }
  return true;
}

void ComponentTree::fire(const ComponentId& id, const Event& event) {
  const Component& c = get(id);
  auto it = c.listeners.find(event.type);
  if (it == c.listeners.end()) return;
  std::vector<Listener> snapshot;
  snapshot.reserve(it->second.size());
  for (const auto& entry : it->second) snapshot.push_back(entry.second);
  for (auto& listener : snapshot) {
    if (!exists(id)) break;
    listener(*this, event);
  }
}

std::vector<ComponentId> ComponentTree::subtree(const ComponentId& id) const {
  std::vector<ComponentId> out;
  std::vector<const Component*> stack{&get(id)};
  while (!stack.empty()) {
    const Component* c = stack.back();
    stack.pop_back();
    out.push_back(c->id);
    for (auto it = c->children.rbegin(); it != c->children.rend(); ++it) stack.push_back(&get(*it));
  }
  return out;
}

std::vector<ComponentId> ComponentTree::preorder() const { return subtree(root_); }

RepresentationalNode ComponentTree::render_node(const ComponentId& id) const {
  const Component& c = get(id);
  RepresentationalNode node{c.id, std::string(c.type()), c.properties, c.listened_events(), {}};
  node.children.reserve(c.children.size());
  for (const auto& child : c.children) node.children.push_back(render_node(child));
  return node;
}

RepresentationalModel ComponentTree::render_full() const { return RepresentationalModel(render_node(root_)); }

}  // namespace spiar
