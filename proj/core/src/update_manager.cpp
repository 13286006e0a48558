// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include "spiar/update_manager.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace spiar {

namespace {

std::unordered_map<ComponentId, std::size_t> ranks(const std::vector<ComponentId>& order) {
  std::unordered_map<ComponentId, std::size_t> out;
  out.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out.emplace(order[i], i);
  return out;
}

}  // namespace

void DirtyLog::open() {
  changes_.clear();
  pre_cycle_rank_.reset();
  open_ = true;
}

void DirtyLog::record(StateChange change) {
  if (!open_) throw CycleClosed();
  changes_.push_back(std::move(change));
}

void DirtyLog::before_removal(const ComponentTree& tree) {
  if (open_ && !pre_cycle_rank_) pre_cycle_rank_ = ranks(tree.preorder());
}

std::vector<DeltaDirective> DirtyLog::drain(const ComponentTree& tree) {
  if (!open_) return {};

  std::unordered_set<ComponentId> born;
  std::unordered_set<ComponentId> gone;
  std::vector<const change::ChildAttached*> attaches;
  std::vector<const change::ChildDetached*> detaches;
  for (const auto& c : changes_) {
    if (const auto* a = std::get_if<change::ChildAttached>(&c)) {
      born.insert(a->subtree.begin(), a->subtree.end());
      attaches.push_back(a);
    } else if (const auto* d = std::get_if<change::ChildDetached>(&c)) {
      gone.insert(d->subtree.begin(), d->subtree.end());
      detaches.push_back(d);
    }
  }

  std::vector<DeltaDirective> out;

  // A pre-cycle component whose parent also went is covered by the parent's
  // Remove. Pre-cycle components never move, so the parent at removal time is
  // the pre-cycle parent.
  std::vector<ComponentId> removes;
  for (const auto* d : detaches)
    if (!born.contains(d->id) && !gone.contains(d->parent)) removes.push_back(d->id);
  if (!removes.empty()) {
    const auto& rank = *pre_cycle_rank_;
    std::sort(removes.begin(), removes.end(),
              [&](const ComponentId& a, const ComponentId& b) { return rank.at(a) < rank.at(b); });
    for (auto& id : removes) out.emplace_back(directive::Remove{std::move(id)});
  }

  std::vector<const change::ChildAttached*> creates;
  for (const auto* a : attaches)
    if (!gone.contains(a->child) && !born.contains(a->parent)) creates.push_back(a);
  if (!creates.empty()) {
    auto rank = ranks(tree.preorder());
    std::sort(creates.begin(), creates.end(),
              [&](const auto* a, const auto* b) { return rank.at(a->child) < rank.at(b->child); });
    for (const auto* a : creates) {
      const auto& siblings = tree.get(a->parent).children;
      auto index = static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), a->child) - siblings.begin());
      out.emplace_back(directive::Create{a->parent, index, tree.render_node(a->child)});
    }
  }

  // Residual in-place updates: the surviving (last) entry per key, in record order.
  std::map<std::pair<ComponentId, std::string>, std::size_t> last_property;
  std::unordered_map<ComponentId, std::size_t> last_listeners;
  for (std::size_t i = 0; i < changes_.size(); ++i) {
    if (const auto* p = std::get_if<change::PropertySet>(&changes_[i])) {
      if (!gone.contains(p->id) && !born.contains(p->id)) last_property[{p->id, p->name}] = i;
    } else if (const auto* l = std::get_if<change::ListenersChanged>(&changes_[i])) {
      if (!gone.contains(l->id) && !born.contains(l->id)) last_listeners[l->id] = i;
    }
  }
  std::vector<std::size_t> residual;
  residual.reserve(last_property.size() + last_listeners.size());
  for (const auto& [key, i] : last_property) residual.push_back(i);
  for (const auto& [key, i] : last_listeners) residual.push_back(i);
  std::sort(residual.begin(), residual.end());
  for (std::size_t i : residual) {
    if (auto* p = std::get_if<change::PropertySet>(&changes_[i])) {
      out.emplace_back(directive::SetProperty{p->id, p->name, p->value});
    } else {
      const auto& l = std::get<change::ListenersChanged>(changes_[i]);
      out.emplace_back(directive::SetListeners{l.id, l.listened_events});
    }
  }

  changes_.clear();
  pre_cycle_rank_.reset();
  open_ = false;
  return out;
}

}  // namespace spiar
