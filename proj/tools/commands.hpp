// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <CLI11.hpp>

namespace tws::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitBackend = 3;

/// perturb, build-hard, synth-corpus
void add_data_commands(CLI::App& app);
/// eval, ablate, sweep-steps, report. `exit_code` is raised to kExitBackend
/// when any record hit a backend error.
void add_eval_commands(CLI::App& app, int& exit_code);
/// simulate-theory {contraction, bounds, gain-ratio}, covering-study
void add_theory_commands(CLI::App& app);

} // namespace tws::cli
