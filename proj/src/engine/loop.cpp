// SPDX-License-Identifier: Apache-2.0
#include "tws/engine/loop.hpp"

#include "tws/engine/answer.hpp"
#include "tws/engine/tool_call.hpp"

#include <fmt/format.h>

#include <thread>

namespace tws::engine
{

namespace
{

const PromptTemplates& templates_of(const RunOptions& o)
{
    return o.templates ? *o.templates : default_prompts();
}

std::string call_with_retries(const ModelBackend& backend, std::span<const ChatTurn> turns, const Waveform& audio,
                              const RunOptions& o, std::size_t step)
{
    auto delay = backend.retry_backoff();
    for (std::size_t attempt = 0;; ++attempt)
    {
        try
        {
            return backend.complete({turns, audio, o.record_id, step, attempt});
        }
        catch (const BackendError&)
        {
            if (attempt >= o.retries)
                throw;
        }
        if (delay.count() > 0)
        {
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
    }
}

ChatTurn tool_turn(std::string text, std::optional<ToolCall> call = std::nullopt)
{
    return {Role::Tool, std::move(text), std::nullopt, std::move(call)};
}

} // namespace

ReasoningTrace run_baseline(const Waveform& audio, std::string_view instruction, const ModelBackend& backend,
                            const RunOptions& options)
{
    ReasoningTrace trace;
    trace.record_id = options.record_id;
    trace.mode = RunMode::Baseline;
    trace.k_max = 1;
    trace.turns = init_prompt(instruction, ops::OperatorRegistry{}, templates_of(options));
    trace.audio_versions.push_back(audio);

    std::string text;
    try
    {
        text = call_with_retries(backend, trace.turns, audio, options, 0);
    }
    catch (const BackendError& e)
    {
        trace.terminated_by = Termination::BackendError;
        trace.error = e.what();
        return trace;
    }
    trace.steps_used = 1;
    trace.final_answer = find_answer(text);
    trace.turns.push_back({Role::Assistant, std::move(text), std::size_t{0}, std::nullopt});
    trace.terminated_by = trace.final_answer ? Termination::AnswerFound : Termination::KMaxReached;
    return trace;
}

ReasoningTrace run_tws(const Waveform& audio, std::string_view instruction, const ops::OperatorRegistry& registry,
                       const ModelBackend& backend, const RunOptions& options)
{
    if (options.k_max < 1)
        throw InvalidArgumentError("k_max must be at least 1");
    if (registry.empty())
    {
        auto trace = run_baseline(audio, instruction, backend, options);
        trace.mode = RunMode::Tws;
        return trace;
    }

    ReasoningTrace trace;
    trace.record_id = options.record_id;
    trace.mode = RunMode::Tws;
    trace.k_max = options.k_max;
    trace.turns = init_prompt(instruction, registry, templates_of(options));
    trace.audio_versions.push_back(audio);
    std::size_t current = 0;

    while (trace.steps_used < options.k_max)
    {
        std::string text;
        try
        {
            text = call_with_retries(backend, trace.turns, trace.audio_versions[current], options, trace.steps_used);
        }
        catch (const BackendError& e)
        {
            trace.terminated_by = Termination::BackendError;
            trace.error = e.what();
            return trace;
        }
        ++trace.steps_used;
        trace.turns.push_back({Role::Assistant, text, current, std::nullopt});

        std::optional<ToolCall> call;
        try
        {
            call = parse_tool_call(text, registry);
        }
        catch (const UnknownToolError& e)
        {
            trace.turns.push_back(tool_turn(fmt::format("ERROR unknown_tool: {}", e.what())));
            continue;
        }
        catch (const InvalidArgsError& e)
        {
            trace.turns.push_back(tool_turn(fmt::format("ERROR invalid_args: {}", e.what())));
            continue;
        }

        if (!call)
        {
            if (const auto answer = find_answer(text))
            {
                trace.final_answer = answer;
                trace.terminated_by = Termination::AnswerFound;
                return trace;
            }
            continue;
        }

        const std::string name = call->name;
        try
        {
            auto out = registry.invoke(name, trace.audio_versions[current], call->args);
            auto turn = tool_turn(fmt::format("{}: {}", name, out.text), std::move(call));
            if (out.audio)
            {
                trace.audio_versions.push_back(std::move(*out.audio));
                current = trace.audio_versions.size() - 1;
                turn.audio_ref = current;
            }
            trace.turns.push_back(std::move(turn));
        }
        catch (const Error& e)
        {
            trace.turns.push_back(
                tool_turn(fmt::format("ERROR operator_failed: {}: {}", name, e.what()), std::move(call)));
        }
    }
    trace.terminated_by = Termination::KMaxReached;
    return trace;
}

std::vector<Waveform> replay(const Waveform& original, std::span<const ChatTurn> turns,
                             const ops::OperatorRegistry& registry)
{
    std::vector<Waveform> versions{original};
    for (const auto& t: turns)
    {
        if (t.role != Role::Tool || !t.tool_call || !t.audio_ref)
            continue;
        auto out = registry.invoke(t.tool_call->name, versions.back(), t.tool_call->args);
        if (!out.audio)
            throw DataError("recorded call " + t.tool_call->name + " did not produce audio on replay");
        versions.push_back(std::move(*out.audio));
    }
    return versions;
}

} // namespace tws::engine
