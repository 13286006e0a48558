// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "spiar/component_tree.hpp"
#include "spiar/representational_model.hpp"

namespace spiar {

class CycleClosed : public Error {
 public:
  CycleClosed() : Error("change recorded outside a processing cycle") {}
};

/// Collects the state changes of one processing cycle and turns them into a
/// coalesced list of delta directives.
///
/// Coalescing rules applied by drain():
///  - repeated writes of one (id, property) keep the last value;
///  - changes to components removed in the same cycle are dropped;
///  - a component attached and removed in the same cycle yields nothing;
///  - writes to components created in the cycle are folded into the Create,
///    which is rendered from the post-cycle tree;
///  - Removes come first (pre-cycle pre-order), then Creates (post-cycle
///    pre-order), then SetProperty/SetListeners in record order of their
///    surviving entry.
class DirtyLog final : public ChangeRecorder {
 public:
  void open();
  bool is_open() const { return open_; }
  std::size_t size() const { return changes_.size(); }
  const std::vector<StateChange>& changes() const { return changes_; }

  void record(StateChange change) override;
  void before_removal(const ComponentTree& tree) override;

  /// Returns the coalesced directives and closes the cycle. Draining a closed
  /// log returns an empty list.
  std::vector<DeltaDirective> drain(const ComponentTree& tree);

 private:
  std::vector<StateChange> changes_;
  std::optional<std::unordered_map<ComponentId, std::size_t>> pre_cycle_rank_;
  bool open_ = false;
};

/// Opens `log`, hooks it to `tree` for its lifetime, unhooks on destruction.
class RecordingScope {
 public:
  RecordingScope(ComponentTree& tree, DirtyLog& log) : tree_(tree), previous_(tree.recorder()) {
    log.open();
    tree_.set_recorder(&log);
  }
  ~RecordingScope() { tree_.set_recorder(previous_); }
  RecordingScope(const RecordingScope&) = delete;
  RecordingScope& operator=(const RecordingScope&) = delete;

 private:
  ComponentTree& tree_;
  ChangeRecorder* previous_;
};

}  // namespace spiar
