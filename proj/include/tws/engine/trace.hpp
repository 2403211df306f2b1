// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"
#include "tws/ops/registry.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tws::engine
{

enum class Role
{
    System,
    User,
    Assistant,
    Tool,
};

[[nodiscard]] std::string_view to_string(Role r) noexcept;
[[nodiscard]] Role role_from_string(std::string_view s);

/// The seven answer categories.
enum class Emotion
{
    Anger,
    Disgust,
    Fear,
    Joy,
    Neutral,
    Sadness,
    Surprise,
};

inline constexpr std::size_t kEmotionCount = 7;

[[nodiscard]] std::string_view to_string(Emotion e) noexcept;
/// Exact, case-insensitive match against the seven names.
[[nodiscard]] std::optional<Emotion> emotion_from_string(std::string_view s) noexcept;
[[nodiscard]] Emotion emotion_at(std::size_t index);
[[nodiscard]] std::size_t emotion_index(Emotion e) noexcept;

struct ToolCall
{
    /// Canonical registry spelling.
    std::string name;
    /// Arguments in the order written.
    ops::RawArgs args;

    friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

/// "[TOOL: name(k=v, ...)]"
[[nodiscard]] std::string render(const ToolCall& call);

struct ChatTurn
{
    Role role = Role::User;
    std::string text;
    /// Index into ReasoningTrace::audio_versions. User and assistant turns point
    /// at the version the model heard; a tool turn points at the version its
    /// call produced and has no reference when the audio did not change.
    std::optional<std::size_t> audio_ref;
    /// On tool turns: the call that was executed (absent when parsing failed).
    std::optional<ToolCall> tool_call;

    friend bool operator==(const ChatTurn&, const ChatTurn&) = default;
};

enum class Termination
{
    AnswerFound,
    KMaxReached,
    BackendError,
};

[[nodiscard]] std::string_view to_string(Termination t) noexcept;
[[nodiscard]] Termination termination_from_string(std::string_view s);

enum class RunMode
{
    Baseline,
    Tws,
};

[[nodiscard]] std::string_view to_string(RunMode m) noexcept;
[[nodiscard]] RunMode mode_from_string(std::string_view s);

struct ReasoningTrace
{
    std::string record_id;
    RunMode mode = RunMode::Tws;
    std::size_t k_max = 0;
    std::vector<ChatTurn> turns;
    /// Index 0 is the input audio.
    std::vector<Waveform> audio_versions;
    std::size_t steps_used = 0;
    Termination terminated_by = Termination::KMaxReached;
    std::optional<Emotion> final_answer;
    /// Backend failure message when terminated_by is BackendError.
    std::string error;

    /// Names of the operators that ran, in call order.
    [[nodiscard]] std::vector<std::string> operators_invoked() const;
};

/// FNV-1a 64 over the sample rate and the little-endian IEEE bytes of every sample.
[[nodiscard]] std::uint64_t audio_hash(const Waveform& w) noexcept;
[[nodiscard]] std::string audio_hash_hex(const Waveform& w);

} // namespace tws::engine
