// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/engine/trace.hpp"
#include "tws/ops/registry.hpp"

#include <cstddef>
#include <optional>
#include <string_view>

namespace tws::engine
{

using UnknownToolError = ops::UnknownOperatorError;
using InvalidArgsError = ops::InvalidOperatorArgsError;

/// Offset of the first "[TOOL:" marker (case-insensitive, blanks allowed
/// around the colon), if any.
[[nodiscard]] std::optional<std::size_t> find_tool_marker(std::string_view text) noexcept;

/// Parses the first tool call in `text`.
///
/// Grammar after the marker: name "(" [key "=" value {"," key "=" value}] ")" "]"
/// where values are bare tokens or single/double-quoted strings with backslash
/// escapes. No marker -> none. Unknown name -> UnknownToolError; any syntax or
/// schema failure -> InvalidArgsError.
[[nodiscard]] std::optional<ToolCall> parse_tool_call(std::string_view text, const ops::OperatorRegistry& registry);

} // namespace tws::engine
