// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/engine/trace.hpp"

#include <optional>
#include <string_view>

namespace tws::engine
{

/// Label of the last "Emotion: <label>" line in `text`. The text after the
/// colon, cut at any tool marker and stripped of surrounding punctuation and
/// emphasis, must equal one of the seven labels (case-insensitive); lines that
/// do not name a label are skipped.
[[nodiscard]] std::optional<Emotion> find_answer(std::string_view text);

/// True iff the latest assistant turn carries a valid answer line and no
/// tool-call pattern.
[[nodiscard]] bool is_terminated(const ReasoningTrace& trace);

/// Latest valid answer line across all assistant turns.
[[nodiscard]] std::optional<Emotion> extract_answer(const ReasoningTrace& trace);

} // namespace tws::engine
