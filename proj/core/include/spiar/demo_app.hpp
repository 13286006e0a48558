// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "spiar/session_runtime.hpp"

namespace spiar {

/// Two-view demo: "form" (textfield, Validate button, status label) and
/// "list" (listbox, item field, Add button, status label). The tree is
/// window c1 > [title label, content panel]; each view rebuilds the content
/// panel.
ApplicationDefinition demo_application();

}  // namespace spiar
