// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "spiar/component_id.hpp"
#include "spiar/error.hpp"
#include "spiar/property_value.hpp"
#include "spiar/representational_model.hpp"
#include "spiar/widgets.hpp"

namespace spiar {

class ComponentTree;

/// A user event as seen by server-side listeners.
struct Event {
  ComponentId source;
  std::string type;
  PropertyValue payload;
};

using Listener = std::function<void(ComponentTree&, const Event&)>;

struct ListenerHandle {
  ComponentId component;
  std::string event;
  std::uint64_t serial = 0;
};

namespace change {

struct PropertySet {
  ComponentId id;
  std::string name;
  PropertyValue value;
};
/// `subtree` lists every id that became reachable with the attach.
struct ChildAttached {
  ComponentId parent;
  ComponentId child;
  std::size_t index = 0;
  std::vector<ComponentId> subtree;
};
/// `parent` is the parent at removal time; `subtree` every id removed.
struct ChildDetached {
  ComponentId id;
  ComponentId parent;
  std::vector<ComponentId> subtree;
};
struct ListenersChanged {
  ComponentId id;
  EventSet listened_events;
};

}  // namespace change

/// One observed mutation of the reachable tree.
using StateChange = std::variant<change::PropertySet, change::ChildAttached,
                                 change::ChildDetached, change::ListenersChanged>;

/// Receives every mutation that touches a component reachable from the root.
/// Mutations of detached (not yet attached) components are not reported; they
/// become visible through the ChildAttached that links them in.
class ChangeRecorder {
 public:
  virtual ~ChangeRecorder() = default;
  virtual void record(StateChange change) = 0;
  /// Called before the first structural removal is applied, while the tree
  /// still has its pre-removal shape.
  virtual void before_removal(const ComponentTree& tree) = 0;
};

class TreeError : public Error {
 public:
  enum class Code {
    kUnknownType,
    kRootTypeReserved,
    kUnknownProperty,
    kPropertyTypeMismatch,
    kNotDetached,
    kNotAContainer,
    kIndexOutOfRange,
    kUnknownId,
    kCannotDetachRoot,
    kUnknownEventType,
    kCycle,
  };
  TreeError(Code code, const std::string& what) : Error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct Component {
  ComponentId id;
  const WidgetSpec* widget = nullptr;
  PropertyMap properties;
  std::map<std::string, std::vector<std::pair<std::uint64_t, Listener>>, std::less<>> listeners;
  std::vector<ComponentId> children;
  std::optional<ComponentId> parent;
  bool in_tree = false;

  std::string_view type() const { return widget->type; }
  EventSet listened_events() const;
};

/// Server-side stateful UI model. The root is a `window` with id `c1`.
/// Components created with create_component float detached until attached;
/// only components reachable from the root are part of the rendered UI.
class ComponentTree {
 public:
  ComponentTree();
  ComponentTree(const ComponentTree&) = delete;
  ComponentTree& operator=(const ComponentTree&) = delete;
  ComponentTree(ComponentTree&&) = default;
  ComponentTree& operator=(ComponentTree&&) = default;

  const ComponentId& root() const { return root_; }

  ComponentId create_component(std::string_view type, const PropertyMap& properties = {});
  void attach(ComponentId parent, ComponentId child, std::size_t index);
  /// Appends `child` as the last child of `parent`.
  void append(ComponentId parent, ComponentId child);
  /// Removes `id` and its whole subtree. Removed ids are never reissued.
  void detach(ComponentId id);
  void set_property(const ComponentId& id, std::string_view name, PropertyValue value);
  const PropertyValue& property(const ComponentId& id, std::string_view name) const;

  ListenerHandle add_listener(const ComponentId& id, std::string_view event, Listener listener);
  /// Returns false if the handle no longer refers to a registered listener.
  bool remove_listener(const ListenerHandle& handle);
  /// Invokes the listeners registered on `id` for `event.type`, in
  /// registration order. Listeners added during dispatch are not invoked;
  /// dispatch stops if the component is removed.
  void fire(const ComponentId& id, const Event& event);

  bool exists(const ComponentId& id) const { return components_.contains(id); }
  /// True when `id` is reachable from the root.
  bool contains(const ComponentId& id) const;
  const Component& get(const ComponentId& id) const;
  /// Number of components reachable from the root.
  std::size_t size() const { return reachable_count_; }
  std::uint64_t next_number() const { return next_number_; }

  /// Reachable ids in depth-first pre-order.
  std::vector<ComponentId> preorder() const;
  std::vector<ComponentId> subtree(const ComponentId& id) const;

  RepresentationalNode render_node(const ComponentId& id) const;
  /// Full structural copy of the reachable tree. Pure.
  RepresentationalModel render_full() const;

  void set_recorder(ChangeRecorder* recorder) { recorder_ = recorder; }
  ChangeRecorder* recorder() const { return recorder_; }

 private:
  Component& mutable_get(const ComponentId& id);
  void check_value(const Component& c, std::string_view name, const PropertyValue& value) const;
  void notify_listeners_changed(const Component& c);

  ComponentId root_;
  std::unordered_map<ComponentId, Component> components_;
  std::uint64_t next_number_ = 1;
  std::uint64_t next_listener_serial_ = 1;
  std::size_t reachable_count_ = 0;
  ChangeRecorder* recorder_ = nullptr;
};

}  // namespace spiar
