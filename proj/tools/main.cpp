// SPDX-License-Identifier: Apache-2.0
// tws: command-line front end for the toolkit.
#include "commands.hpp"
#include "json_config.hpp"

#include "tws/core/error.hpp"
#include "tws/engine/backend.hpp"

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <iostream>

int main(int argc, char** argv)
{
    using namespace tws::cli;

    CLI::App app("Audio perturbation, tool-loop evaluation and contraction checks", "tws");
    app.fallthrough();
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>(&app));
    app.set_config("--config", "", "JSON file with the same keys as the flags; flags win");
    app.allow_config_extras(CLI::config_extras_mode::error);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging");
    app.parse_complete_callback([&] { spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn); });

    int exit_code = kExitOk;
    add_data_commands(app);
    add_eval_commands(app, exit_code);
    add_theory_commands(app);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    catch (const tws::engine::BackendError& e)
    {
        std::cerr << "backend error: " << e.what() << '\n';
        return kExitBackend;
    }
    catch (const tws::InvalidArgumentError& e)
    {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const tws::Error& e)
    {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    }
    catch (const nlohmann::json::exception& e)
    {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    }
    return exit_code;
}
