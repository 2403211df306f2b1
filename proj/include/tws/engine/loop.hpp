// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"
#include "tws/engine/backend.hpp"
#include "tws/engine/prompt.hpp"
#include "tws/engine/trace.hpp"
#include "tws/ops/registry.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tws::engine
{

inline constexpr std::size_t kDefaultMaxSteps = 5;
inline constexpr std::size_t kBackendRetries = 2;

struct RunOptions
{
    std::size_t k_max = kDefaultMaxSteps;
    std::string record_id;
    std::size_t retries = kBackendRetries;
    const PromptTemplates* templates = nullptr;
};

/// Interleaved loop: each step attaches the current audio, asks the backend for
/// a turn and, when the turn calls a tool, applies it to the current audio.
/// Unknown tools, bad arguments and operator failures come back as a tool turn
/// and still use up the step. With an empty registry the call degenerates to
/// run_baseline.
[[nodiscard]] ReasoningTrace run_tws(const Waveform& audio, std::string_view instruction,
                                     const ops::OperatorRegistry& registry, const ModelBackend& backend,
                                     const RunOptions& options = {});

/// Single call on the baseline prompt; tool calls in the reply are ignored.
[[nodiscard]] ReasoningTrace run_baseline(const Waveform& audio, std::string_view instruction,
                                          const ModelBackend& backend, const RunOptions& options = {});

/// Re-applies the recorded tool calls of `turns` to `original`. Returns every
/// audio version in order, starting with `original`.
[[nodiscard]] std::vector<Waveform> replay(const Waveform& original, std::span<const ChatTurn> turns,
                                           const ops::OperatorRegistry& registry);

} // namespace tws::engine
