// SPDX-License-Identifier: Apache-2.0
#include "tws/engine/trace.hpp"

#include "tws/core/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstring>

namespace tws::engine
{

namespace
{

constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "anger", "disgust", "fear", "joy", "neutral", "sadness", "surprise",
};

bool iequals(std::string_view a, std::string_view b) noexcept
{
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_bytes(std::uint64_t& h, const unsigned char* p, std::size_t n) noexcept
{
    for (std::size_t i = 0; i < n; ++i)
    {
        h ^= p[i];
        h *= kFnvPrime;
    }
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) noexcept
{
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<unsigned char>(v >> (8 * i));
    fnv_bytes(h, b, 8);
}

} // namespace

std::string_view to_string(Role r) noexcept
{
    switch (r)
    {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
        case Role::Tool: return "tool";
    }
    return "user";
}

Role role_from_string(std::string_view s)
{
    for (auto r: {Role::System, Role::User, Role::Assistant, Role::Tool})
        if (s == to_string(r))
            return r;
    throw DataError("unknown role: " + std::string(s));
}

std::string_view to_string(Emotion e) noexcept
{
    return kEmotionNames[emotion_index(e)];
}

std::optional<Emotion> emotion_from_string(std::string_view s) noexcept
{
    for (std::size_t i = 0; i < kEmotionCount; ++i)
        if (iequals(s, kEmotionNames[i]))
            return static_cast<Emotion>(i);
    return std::nullopt;
}

Emotion emotion_at(std::size_t index)
{
    if (index >= kEmotionCount)
        throw InvalidArgumentError("emotion index out of range: " + std::to_string(index));
    return static_cast<Emotion>(index);
}

std::size_t emotion_index(Emotion e) noexcept
{
    return static_cast<std::size_t>(e);
}

std::string render(const ToolCall& call)
{
    std::string args;
    for (const auto& [k, v]: call.args)
    {
        if (!args.empty())
            args += ", ";
        args += fmt::format("{}={}", k, v);
    }
    return fmt::format("[TOOL: {}({})]", call.name, args);
}

std::string_view to_string(Termination t) noexcept
{
    switch (t)
    {
        case Termination::AnswerFound: return "answer_found";
        case Termination::KMaxReached: return "k_max_reached";
        case Termination::BackendError: return "backend_error";
    }
    return "k_max_reached";
}

Termination termination_from_string(std::string_view s)
{
    for (auto t: {Termination::AnswerFound, Termination::KMaxReached, Termination::BackendError})
        if (s == to_string(t))
            return t;
    throw DataError("unknown termination: " + std::string(s));
}

std::string_view to_string(RunMode m) noexcept
{
    return m == RunMode::Baseline ? "baseline" : "tws";
}

RunMode mode_from_string(std::string_view s)
{
    if (iequals(s, "baseline"))
        return RunMode::Baseline;
    if (iequals(s, "tws"))
        return RunMode::Tws;
    throw InvalidArgumentError("unknown mode: " + std::string(s));
}

std::vector<std::string> ReasoningTrace::operators_invoked() const
{
    std::vector<std::string> out;
    for (const auto& t: turns)
        if (t.role == Role::Tool && t.tool_call)
            out.push_back(t.tool_call->name);
    return out;
}

std::uint64_t audio_hash(const Waveform& w) noexcept
{
    std::uint64_t h = kFnvOffset;
    fnv_u64(h, static_cast<std::uint64_t>(w.sample_rate()));
    for (double s: w.samples())
        fnv_u64(h, std::bit_cast<std::uint64_t>(s));
    return h;
}

std::string audio_hash_hex(const Waveform& w)
{
    return fmt::format("{:016x}", audio_hash(w));
}

} // namespace tws::engine
