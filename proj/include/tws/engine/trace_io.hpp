// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/engine/trace.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace tws::engine
{

/// A trace as persisted: turns and outcome, with audio versions reduced to
/// their hashes.
struct StoredTrace
{
    ReasoningTrace trace;
    std::vector<std::string> audio_hashes;
    std::vector<std::size_t> audio_lengths;
};

[[nodiscard]] nlohmann::ordered_json to_json(const ReasoningTrace& trace);
[[nodiscard]] StoredTrace trace_from_json(const nlohmann::json& j);

/// Pretty-printed JSON with a trailing newline. Throws WriteError.
void write_trace(const ReasoningTrace& trace, const std::filesystem::path& path);
/// Throws FileNotFoundError or DataError.
[[nodiscard]] StoredTrace read_trace(const std::filesystem::path& path);

/// "<dir>/<record_id>.json" with path separators in the id replaced.
[[nodiscard]] std::filesystem::path trace_path(const std::filesystem::path& dir, std::string_view record_id);

} // namespace tws::engine
