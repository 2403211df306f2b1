// SPDX-License-Identifier: Apache-2.0
#include "tws/engine/prompt.hpp"

#include "tws/ops/registry.hpp"

#include <fmt/format.h>

namespace tws::engine
{

namespace
{

constexpr std::string_view kCategories = "anger, disgust, fear, joy, neutral, sadness, surprise";

PromptTemplates make_defaults()
{
    PromptTemplates t;
    t.baseline_system = fmt::format(
        "You are an expert listener who recognizes emotion in speech. The attached clip holds one speaker's "
        "utterance taken from a conversation. Decide which emotion the speaker expresses.\n"
        "\n"
        "Categories: {}\n"
        "\n"
        "Reason step by step, then give the answer on its own line as:\n"
        "Emotion: [category]\n",
        kCategories);
    t.tws_system =
        "You are an audio analysis system that can inspect and transform the signal with processing tools "
        "before deciding on the speaker's emotion.\n"
        "\n"
        "Available tools:\n"
        "\n"
        "{tools}\n"
        "\n"
        "If the clip sounds degraded or hard to judge, work in steps:\n"
        "1. Judge the audio quality and name any problems.\n"
        "2. Apply the tools that address those problems.\n"
        "3. Measure acoustic evidence with the analysis tools.\n"
        "\n"
        "Format tool calls as:\n"
        "[TOOL: tool_name(parameters)]\n"
        "\n"
        "Use one tool call per turn. Its result comes back in the next message, and audio-changing tools "
        "replace the clip you hear.\n";
    t.baseline_task = "Classify the emotion of the speaker in the attached clip.\n";
    t.tws_task = fmt::format(
        "Determine the speaker's emotional state in the attached clip. Use the tools where they help, "
        "particularly when the recording is degraded.\n"
        "\n"
        "Emotion categories: {}\n"
        "\n"
        "1. Assess the clip quality.\n"
        "2. Process the audio if needed.\n"
        "3. Extract acoustic evidence with the analysis tools.\n"
        "4. Combine the observations.\n"
        "5. Decide.\n"
        "\n"
        "Show your reasoning and say what each tool call contributed. End with:\n"
        "Reasoning: [brief justification]\n"
        "Emotion: [category]\n",
        kCategories);
    return t;
}

} // namespace

const PromptTemplates& default_prompts()
{
    static const PromptTemplates t = make_defaults();
    return t;
}

std::string render_tool_list(const ops::OperatorRegistry& registry)
{
    std::string out;
    for (const auto& e: registry.entries())
    {
        if (!out.empty())
            out += '\n';
        out += "- " + e.descriptor.signature();
    }
    return out;
}

std::vector<ChatTurn> init_prompt(std::string_view instruction, const ops::OperatorRegistry& registry,
                                  const PromptTemplates& templates)
{
    std::string task(instruction);
    if (task.empty())
        task = registry.empty() ? templates.baseline_task : templates.tws_task;
    std::string system;
    if (registry.empty())
        system = templates.baseline_system;
    else
    {
        system = templates.tws_system;
        const auto slot = system.find(kToolListSlot);
        const std::string tools = render_tool_list(registry);
        if (slot == std::string::npos)
            system += "\n" + tools + "\n";
        else
            system.replace(slot, kToolListSlot.size(), tools);
    }
    return {
        ChatTurn{Role::System, std::move(system), std::nullopt, std::nullopt},
        ChatTurn{Role::User, task, std::size_t{0}, std::nullopt},
    };
}

std::vector<std::string> advertised_tools(std::string_view system_text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < system_text.size())
    {
        auto end = system_text.find('\n', start);
        if (end == std::string_view::npos)
            end = system_text.size();
        const auto line = system_text.substr(start, end - start);
        start = end + 1;
        if (!line.starts_with("- "))
            continue;
        const auto open = line.find('(');
        if (open == std::string_view::npos)
            continue;
        const auto name = line.substr(2, open - 2);
        if (ops::is_valid_identifier(name))
            out.emplace_back(name);
    }
    return out;
}

} // namespace tws::engine
