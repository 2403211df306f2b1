// SPDX-License-Identifier: Apache-2.0
#include "json_config.hpp"

#include <json.hpp>

#include <algorithm>

namespace tws::cli
{

namespace
{

std::string flag_name(std::string key)
{
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

std::string scalar(const nlohmann::json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    return v.dump();
}

// Sections are named from the root; flat keys attach to `flat_parents`.
void collect(const nlohmann::json& obj, const std::vector<std::string>& section,
             const std::vector<std::string>& flat_parents, std::vector<CLI::ConfigItem>& out)
{
    for (const auto& [key, value]: obj.items())
    {
        if (key == "config")
            continue;
        if (value.is_object())
        {
            auto deeper = section;
            deeper.push_back(key);
            collect(value, deeper, deeper, out);
            continue;
        }
        CLI::ConfigItem item;
        item.parents = flat_parents;
        item.name = flag_name(key);
        if (value.is_array())
            for (const auto& v: value)
                item.inputs.push_back(scalar(v));
        else
            item.inputs.push_back(scalar(value));
        out.push_back(std::move(item));
    }
}

} // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool, std::string) const
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto* opt: app->get_options())
    {
        if (opt->get_lnames().empty() || opt->get_lnames().front() == "config")
            continue;
        const auto& results = opt->results();
        if (!results.empty())
            j[opt->get_lnames().front()] = results.size() == 1 ? nlohmann::ordered_json(results.front())
                                                               : nlohmann::ordered_json(results);
        else if (default_also && !opt->get_default_str().empty())
            j[opt->get_lnames().front()] = opt->get_default_str();
    }
    return j.dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(input);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw CLI::ConfigError("config must be a JSON object");

    // Flat keys belong to the deepest subcommand on the command line.
    std::vector<std::string> active;
    for (const CLI::App* app = _root;;)
    {
        const auto subs = app->get_subcommands();
        if (subs.empty())
            break;
        app = subs.front();
        active.push_back(app->get_name());
    }
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, active, items);
    return items;
}

} // namespace tws::cli
