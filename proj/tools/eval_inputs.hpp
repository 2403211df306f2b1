// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/bench/evaluate.hpp"
#include "tws/bench/report.hpp"
#include "tws/bench/synthetic.hpp"
#include "tws/engine/backend.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace tws::cli
{

/// Flags shared by eval, ablate and sweep-steps.
struct EvalArgs
{
    // corpus: exactly one of these
    std::string manifest;
    std::string sources;
    std::string audio_dir;
    std::string labels;

    std::string backend = "oracle";
    std::string script;
    std::string policy;
    double alpha = 1.0;
    CLI::Option* alpha_opt = nullptr;
    std::uint64_t oracle_seed = 0;
    CLI::Option* oracle_seed_opt = nullptr;
    std::string api_base;
    std::string model;
    int timeout_s = 120;
    std::size_t max_in_flight = 4;

    std::string mode = "tws";
    std::size_t k_max = engine::kDefaultMaxSteps;
    std::vector<std::string> exclude;
    std::size_t parallelism = 1;
    std::string trace_dir;
    std::string instruction;
    std::string out;
    std::string format = "jsonl";
};

void add_eval_options(CLI::App* cmd, EvalArgs& args, bool with_mode);

struct Corpus
{
    std::vector<bench::EvalItem> items;
    /// Filled for the oracle backend only.
    bench::TruthTable truths;
};

[[nodiscard]] Corpus load_corpus(const EvalArgs& args);
[[nodiscard]] std::unique_ptr<engine::ModelBackend> make_backend(const EvalArgs& args, const Corpus& corpus);
[[nodiscard]] bench::EvalConfig make_config(const EvalArgs& args);

/// Creates `dir` (WriteError on failure) and returns it.
std::filesystem::path output_dir(const std::string& dir);

} // namespace tws::cli
