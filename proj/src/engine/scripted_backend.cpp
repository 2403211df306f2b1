// SPDX-License-Identifier: Apache-2.0
#include "tws/engine/scripted_backend.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace tws::engine
{

namespace
{

constexpr std::string_view kError = "!ERROR";
constexpr std::string_view kFlaky = "!FLAKY:";

} // namespace

ScriptedBackend::ScriptedBackend(std::vector<std::string> default_script,
                                 std::map<std::string, std::vector<std::string>, std::less<>> per_record)
    : _default(std::move(default_script)), _records(std::move(per_record))
{
}

ScriptedBackend ScriptedBackend::from_json(const nlohmann::json& j)
{
    try
    {
        std::vector<std::string> def;
        if (j.contains("default"))
            def = j.at("default").get<std::vector<std::string>>();
        std::map<std::string, std::vector<std::string>, std::less<>> records;
        if (j.contains("records"))
            for (const auto& [id, script]: j.at("records").items())
                records.emplace(id, script.get<std::vector<std::string>>());
        return ScriptedBackend(std::move(def), std::move(records));
    }
    catch (const nlohmann::json::exception& e)
    {
        throw DataError(std::string("malformed script: ") + e.what());
    }
}

ScriptedBackend ScriptedBackend::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileNotFoundError(path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try
    {
        return from_json(nlohmann::json::parse(ss.str()));
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw DataError("script is not JSON: " + path.string() + ": " + e.what());
    }
}

std::string ScriptedBackend::complete(const BackendRequest& request) const
{
    const auto it = _records.find(request.record_id);
    const auto& script = it != _records.end() ? it->second : _default;
    if (script.empty())
        throw BackendError(fmt::format("no script for record '{}'", request.record_id));
    const std::string& entry = script[std::min(request.step, script.size() - 1)];
    if (entry == kError)
        throw BackendError(fmt::format("scripted failure at step {}", request.step));
    if (entry.starts_with(kFlaky))
    {
        if (request.attempt == 0)
            throw BackendError(fmt::format("scripted transient failure at step {}", request.step));
        return entry.substr(kFlaky.size());
    }
    return entry;
}

} // namespace tws::engine
