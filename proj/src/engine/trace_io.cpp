// SPDX-License-Identifier: Apache-2.0
#include "tws/engine/trace_io.hpp"

#include "tws/core/error.hpp"

#include <fstream>
#include <sstream>

namespace tws::engine
{

nlohmann::ordered_json to_json(const ReasoningTrace& trace)
{
    nlohmann::ordered_json turns = nlohmann::ordered_json::array();
    for (const auto& t: trace.turns)
    {
        nlohmann::ordered_json j;
        j["role"] = to_string(t.role);
        j["text"] = t.text;
        j["audio_ref"] = t.audio_ref ? nlohmann::ordered_json(*t.audio_ref) : nlohmann::ordered_json();
        if (t.tool_call)
        {
            nlohmann::ordered_json args = nlohmann::ordered_json::array();
            for (const auto& [k, v]: t.tool_call->args)
                args.push_back({{"name", k}, {"value", v}});
            j["tool_call"] = {{"name", t.tool_call->name}, {"args", std::move(args)}};
        }
        turns.push_back(std::move(j));
    }
    nlohmann::ordered_json versions = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < trace.audio_versions.size(); ++i)
    {
        const auto& w = trace.audio_versions[i];
        versions.push_back({{"index", i},
                            {"samples", w.size()},
                            {"sample_rate", w.sample_rate()},
                            {"fnv1a64", audio_hash_hex(w)}});
    }

    nlohmann::ordered_json j;
    j["record_id"] = trace.record_id;
    j["mode"] = to_string(trace.mode);
    j["k_max"] = trace.k_max;
    j["steps_used"] = trace.steps_used;
    j["terminated_by"] = to_string(trace.terminated_by);
    j["final_answer"] = trace.final_answer ? nlohmann::ordered_json(to_string(*trace.final_answer))
                                           : nlohmann::ordered_json();
    j["error"] = trace.error;
    j["operators_invoked"] = trace.operators_invoked();
    j["turns"] = std::move(turns);
    j["audio_versions"] = std::move(versions);
    return j;
}

StoredTrace trace_from_json(const nlohmann::json& j)
{
    try
    {
        StoredTrace out;
        auto& t = out.trace;
        t.record_id = j.at("record_id").get<std::string>();
        t.mode = mode_from_string(j.at("mode").get<std::string>());
        t.k_max = j.at("k_max").get<std::size_t>();
        t.steps_used = j.at("steps_used").get<std::size_t>();
        t.terminated_by = termination_from_string(j.at("terminated_by").get<std::string>());
        if (!j.at("final_answer").is_null())
        {
            const auto label = j.at("final_answer").get<std::string>();
            t.final_answer = emotion_from_string(label);
            if (!t.final_answer)
                throw DataError("unknown label in trace: " + label);
        }
        t.error = j.value("error", std::string());
        for (const auto& jt: j.at("turns"))
        {
            ChatTurn turn;
            turn.role = role_from_string(jt.at("role").get<std::string>());
            turn.text = jt.at("text").get<std::string>();
            if (!jt.at("audio_ref").is_null())
                turn.audio_ref = jt.at("audio_ref").get<std::size_t>();
            if (jt.contains("tool_call"))
            {
                ToolCall call{jt.at("tool_call").at("name").get<std::string>(), {}};
                for (const auto& a: jt.at("tool_call").at("args"))
                    call.args.emplace_back(a.at("name").get<std::string>(), a.at("value").get<std::string>());
                turn.tool_call = std::move(call);
            }
            t.turns.push_back(std::move(turn));
        }
        for (const auto& v: j.at("audio_versions"))
        {
            out.audio_hashes.push_back(v.at("fnv1a64").get<std::string>());
            out.audio_lengths.push_back(v.at("samples").get<std::size_t>());
        }
        return out;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw DataError(std::string("malformed trace: ") + e.what());
    }
    catch (const InvalidArgumentError& e)
    {
        throw DataError(std::string("malformed trace: ") + e.what());
    }
}

void write_trace(const ReasoningTrace& trace, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw WriteError("cannot write trace: " + path.string());
    out << to_json(trace).dump(2) << '\n';
    if (!out)
        throw WriteError("failed writing trace: " + path.string());
}

StoredTrace read_trace(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileNotFoundError(path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(ss.str());
    }
    catch (const nlohmann::json::exception& e)
    {
        throw DataError("trace is not JSON: " + path.string() + ": " + e.what());
    }
    return trace_from_json(j);
}

std::filesystem::path trace_path(const std::filesystem::path& dir, std::string_view record_id)
{
    std::string name(record_id);
    for (char& c: name)
        if (c == '/' || c == '\\' || c == ':')
            c = '_';
    return dir / (name + ".json");
}

} // namespace tws::engine
