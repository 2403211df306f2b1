// SPDX-License-Identifier: Apache-2.0
#include "tws/engine/answer.hpp"

#include "tws/engine/tool_call.hpp"

#include <cctype>

namespace tws::engine
{

namespace
{

constexpr std::string_view kKeyword = "emotion";
constexpr std::string_view kStrip = " \t\r*_`'\".,;:!?[](){}<>";

bool is_alnum(char c) noexcept
{
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

bool keyword_at(std::string_view line, std::size_t i) noexcept
{
    if (i + kKeyword.size() > line.size())
        return false;
    for (std::size_t k = 0; k < kKeyword.size(); ++k)
        if (std::tolower(static_cast<unsigned char>(line[i + k])) != kKeyword[k])
            return false;
    return i == 0 || !is_alnum(line[i - 1]);
}

/// Label named by one line, taking the last "emotion:" on it.
std::optional<Emotion> answer_on_line(std::string_view line)
{
    std::optional<Emotion> found;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        if (!keyword_at(line, i))
            continue;
        std::size_t j = i + kKeyword.size();
        while (j < line.size() && (line[j] == ' ' || line[j] == '\t' || line[j] == '*' || line[j] == '_'))
            ++j;
        if (j >= line.size() || line[j] != ':')
            continue;
        std::string_view rest = line.substr(j + 1);
        if (const auto marker = find_tool_marker(rest))
            rest = rest.substr(0, *marker);
        const auto b = rest.find_first_not_of(kStrip);
        if (b == std::string_view::npos)
            continue;
        const auto e = rest.find_last_not_of(kStrip);
        if (const auto label = emotion_from_string(rest.substr(b, e - b + 1)))
            found = label;
    }
    return found;
}

const ChatTurn* last_assistant(const ReasoningTrace& trace) noexcept
{
    for (auto it = trace.turns.rbegin(); it != trace.turns.rend(); ++it)
        if (it->role == Role::Assistant)
            return &*it;
    return nullptr;
}

} // namespace

std::optional<Emotion> find_answer(std::string_view text)
{
    std::optional<Emotion> found;
    std::size_t start = 0;
    while (start <= text.size())
    {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        if (const auto a = answer_on_line(text.substr(start, end - start)))
            found = a;
        start = end + 1;
    }
    return found;
}

bool is_terminated(const ReasoningTrace& trace)
{
    const auto* t = last_assistant(trace);
    return t && !find_tool_marker(t->text) && find_answer(t->text).has_value();
}

std::optional<Emotion> extract_answer(const ReasoningTrace& trace)
{
    std::optional<Emotion> found;
    for (const auto& t: trace.turns)
        if (t.role == Role::Assistant)
            if (const auto a = find_answer(t.text))
                found = a;
    return found;
}

} // namespace tws::engine
