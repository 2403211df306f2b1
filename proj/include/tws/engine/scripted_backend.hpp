// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/engine/backend.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace tws::engine
{

/// Replies from fixed scripts. Step i of a record gets entry i of the record's
/// script (or of the default script); the last entry repeats once the script
/// runs out. Two entry forms are directives rather than text:
///   "!ERROR"          every attempt fails with BackendError
///   "!FLAKY:<text>"   the first attempt fails, retries get <text>
class ScriptedBackend final : public ModelBackend
{
  public:
    ScriptedBackend(std::vector<std::string> default_script,
                    std::map<std::string, std::vector<std::string>, std::less<>> per_record = {});

    /// {"default": [...], "records": {"<id>": [...]}}; throws DataError.
    static ScriptedBackend from_json(const nlohmann::json& j);
    static ScriptedBackend load(const std::filesystem::path& path);

    [[nodiscard]] std::string complete(const BackendRequest& request) const override;
    [[nodiscard]] std::string id() const override { return "scripted"; }

  private:
    std::vector<std::string> _default;
    std::map<std::string, std::vector<std::string>, std::less<>> _records;
};

} // namespace tws::engine
