// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <CLI11.hpp>

namespace tws::cli
{

/// JSON config files for CLI11. Top-level scalar or array keys name flags of
/// the subcommand being run ("k_max" and "k-max" both match --k-max); object
/// values open a subcommand section. Flags given on the command line win.
class JsonConfig : public CLI::Config
{
  public:
    explicit JsonConfig(const CLI::App* root) : _root(root) {}

    std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                          std::string prefix) const override;
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;

  private:
    const CLI::App* _root;
};

} // namespace tws::cli
