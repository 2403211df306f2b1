// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/engine/trace.hpp"
#include "tws/ops/registry.hpp"

#include <string>
#include <vector>

namespace tws::engine
{

/// Placeholder in the system template replaced by the tool list.
inline constexpr std::string_view kToolListSlot = "{tools}";

/// Prompt texts. The defaults can be replaced wholesale, e.g. to run the
/// original wording against a network model.
struct PromptTemplates
{
    std::string baseline_system;
    std::string tws_system;
    std::string baseline_task;
    std::string tws_task;
};

[[nodiscard]] const PromptTemplates& default_prompts();

/// One "- name(p=default): summary" line per operator, in registry order.
[[nodiscard]] std::string render_tool_list(const ops::OperatorRegistry& registry);

/// System turn plus user turn (audio_ref 0). An empty registry gives the
/// baseline system prompt with no tool section. An empty instruction selects
/// the template task text for the mode.
[[nodiscard]] std::vector<ChatTurn> init_prompt(std::string_view instruction, const ops::OperatorRegistry& registry,
                                                const PromptTemplates& templates = default_prompts());

/// Names listed in a system prompt's tool section, in order.
[[nodiscard]] std::vector<std::string> advertised_tools(std::string_view system_text);

} // namespace tws::engine
