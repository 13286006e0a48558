// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/demo_app.hpp"

namespace spiar {

namespace {

const std::string& text_of(const ComponentTree& tree, const ComponentId& id, std::string_view name) {
  return std::get<std::string>(tree.property(id, name));
}

ComponentId build_form(ComponentTree& tree) {
  auto panel = tree.create_component("panel", {{"style", std::string("form")}});
  auto field = tree.create_component("textfield");
  auto validate = tree.create_component("button", {{"text", std::string("Validate")}});
  auto status = tree.create_component("label");
  tree.append(panel, field);
  tree.append(panel, validate);
  tree.append(panel, status);

  tree.add_listener(validate, events::kAction, [field, status](ComponentTree& t, const Event&) {
    const std::string& value = text_of(t, field, "value");
    t.set_property(status, "text", value.empty() ? std::string("Please enter a value.") : "Hello, " + value + "!");
  });
  return panel;
}

ComponentId build_list(ComponentTree& tree) {
  auto panel = tree.create_component("panel", {{"style", std::string("list")}});
  auto list = tree.create_component("listbox");
  auto field = tree.create_component("textfield");
  auto add = tree.create_component("button", {{"text", std::string("Add")}});
  auto status = tree.create_component("label");
  for (const auto& id : {list, field, add, status}) tree.append(panel, id);

  tree.add_listener(add, events::kAction, [list, field, status](ComponentTree& t, const Event&) {
    TextList items = std::get<TextList>(t.property(list, "items"));
    std::string item = text_of(t, field, "value");
    if (item.empty()) item = "item " + std::to_string(items.size() + 1);
    items.push_back(item);
    t.set_property(list, "items", std::move(items));
    t.set_property(field, "value", std::string());
    t.set_property(status, "text", "Added " + item);

    // Selection only matters once there is something to select.
    if (t.get(list).listened_events().empty()) {
      t.add_listener(list, events::kValueChange, [list, status](ComponentTree& t2, const Event&) {
        const auto& all = std::get<TextList>(t2.property(list, "items"));
        auto index = std::get<std::int64_t>(t2.property(list, "selected-index"));
        if (index >= 0 && static_cast<std::size_t>(index) < all.size()) {
          t2.set_property(status, "text", "Selected " + all[static_cast<std::size_t>(index)]);
        } else {
          t2.set_property(status, "text", std::string("Nothing selected"));
        }
      });
    }
  });
  return panel;
}

void show(ComponentTree& tree, ComponentId (*build)(ComponentTree&)) {
  const auto& children = tree.get(tree.root()).children;
  if (children.size() > 1) tree.detach(children[1]);
  auto content = build(tree);
  tree.append(tree.root(), content);
}

}  // namespace

ApplicationDefinition demo_application() {
  ApplicationDefinition app;
  app.init = [](ComponentTree& tree) {
    auto title = tree.create_component("label", {{"text", std::string("SPIAR demo")}});
    tree.append(tree.root(), title);
    tree.append(tree.root(), build_form(tree));
  };
  app.views.emplace("form", [](ComponentTree& tree) { show(tree, build_form); });
  app.views.emplace("list", [](ComponentTree& tree) { show(tree, build_list); });
  return app;
}

}  // namespace spiar
