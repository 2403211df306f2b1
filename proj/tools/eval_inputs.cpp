// SPDX-License-Identifier: Apache-2.0
#include "eval_inputs.hpp"

#include "tws/bench/manifest.hpp"
#include "tws/core/error.hpp"
#include "tws/engine/http_backend.hpp"
#include "tws/engine/oracle_backend.hpp"
#include "tws/engine/scripted_backend.hpp"
#include "tws/perturb/hard_set.hpp"

#include <cstdlib>
#include <fstream>

namespace tws::cli
{

namespace
{

std::string env(const char* name)
{
    const char* v = std::getenv(name);
    return v ? v : "";
}

nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileNotFoundError(path);
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw DataError(path + " is not JSON: " + e.what());
    }
}

} // namespace

void add_eval_options(CLI::App* cmd, EvalArgs& a, bool with_mode)
{
    cmd->add_option("--manifest", a.manifest, "Hard-set manifest (JSONL) to evaluate")->group("Corpus");
    cmd->add_option("--sources", a.sources, "Source manifest (JSONL); clips are evaluated as they are")->group("Corpus");
    cmd->add_option("--audio-dir", a.audio_dir, "Directory of <utterance_id>.wav files")->group("Corpus");
    cmd->add_option("--labels", a.labels, "CSV utterance_id,label for --audio-dir")->group("Corpus");

    cmd->add_option("--backend", a.backend, "Model backend")
        ->check(CLI::IsMember({"scripted", "oracle", "http"}))
        ->capture_default_str()
        ->group("Backend");
    cmd->add_option("--script", a.script, "Scripted backend: JSON script file")->group("Backend");
    cmd->add_option("--policy", a.policy, "Oracle backend: JSON policy file")->group("Backend");
    a.alpha_opt = cmd->add_option("--alpha", a.alpha, "Oracle backend: tool-selection accuracy")
                      ->check(CLI::Range(0.0, 1.0))
                      ->group("Backend");
    a.oracle_seed_opt = cmd->add_option("--oracle-seed", a.oracle_seed, "Oracle backend: seed")->group("Backend");
    cmd->add_option("--api-base", a.api_base, "HTTP backend: API base URL (default $TWS_API_BASE)")->group("Backend");
    cmd->add_option("--model", a.model, "HTTP backend: model name (default $TWS_MODEL)")->group("Backend");
    cmd->add_option("--timeout", a.timeout_s, "HTTP backend: request timeout in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str()
        ->group("Backend");
    cmd->add_option("--max-in-flight", a.max_in_flight, "HTTP backend: concurrent requests")
        ->check(CLI::Range(1, 256))
        ->capture_default_str()
        ->group("Backend");

    if (with_mode)
        cmd->add_option("--mode", a.mode, "Inference mode")
            ->check(CLI::IsMember({"baseline", "tws"}))
            ->capture_default_str();
    cmd->add_option("--k-max", a.k_max, "Maximum reasoning steps")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--exclude", a.exclude, "Operator categories to leave out (denoise,enhance,normalize,analyze)")
        ->delimiter(',');
    cmd->add_option("--parallelism", a.parallelism, "Records run concurrently")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--trace-dir", a.trace_dir, "Write one trace per record here");
    cmd->add_option("--instruction", a.instruction, "Task instruction (default: emotion recognition)");
    cmd->add_option("--out", a.out, "Output directory")->required();
    cmd->add_option("--format", a.format, "Extra report format; JSONL is always written")
        ->check(CLI::IsMember({"csv", "jsonl"}))
        ->capture_default_str();
}

Corpus load_corpus(const EvalArgs& a)
{
    const int given = (a.manifest.empty() ? 0 : 1) + (a.sources.empty() ? 0 : 1) + (a.audio_dir.empty() ? 0 : 1);
    if (given != 1)
        throw InvalidArgumentError("give exactly one of --manifest, --sources or --audio-dir");
    if (a.audio_dir.empty() != a.labels.empty())
        throw InvalidArgumentError("--audio-dir and --labels go together");

    const bool oracle = a.backend == "oracle";
    Corpus c;
    if (!a.manifest.empty())
    {
        const auto m = perturb::read_hard_set_manifest(a.manifest);
        c.items = bench::load_eval_items(m);
        if (oracle)
            c.truths = bench::oracle_truths(m);
        return c;
    }
    const auto sources = a.sources.empty() ? bench::build_manifest(a.audio_dir, a.labels)
                                           : perturb::read_source_manifest(a.sources);
    c.items = bench::load_eval_items(sources);
    if (oracle)
        c.truths = bench::oracle_truths(sources);
    return c;
}

std::unique_ptr<engine::ModelBackend> make_backend(const EvalArgs& a, const Corpus& corpus)
{
    if (a.backend == "scripted")
    {
        if (a.script.empty())
            throw InvalidArgumentError("--backend scripted needs --script");
        return std::make_unique<engine::ScriptedBackend>(engine::ScriptedBackend::load(a.script));
    }
    if (a.backend == "oracle")
    {
        engine::OraclePolicy policy;
        if (!a.policy.empty())
            policy = engine::policy_from_json(read_json_file(a.policy));
        if (a.alpha_opt && a.alpha_opt->count() > 0)
            policy.alpha = a.alpha;
        if (a.oracle_seed_opt && a.oracle_seed_opt->count() > 0)
            policy.seed = a.oracle_seed;
        return std::make_unique<engine::OracleBackend>(policy, corpus.truths);
    }
    engine::HttpBackendOptions o;
    o.base_url = a.api_base.empty() ? env("TWS_API_BASE") : a.api_base;
    o.api_key = env("TWS_API_KEY");
    o.model = a.model.empty() ? env("TWS_MODEL") : a.model;
    o.timeout = std::chrono::seconds(a.timeout_s);
    o.max_in_flight = a.max_in_flight;
    if (o.base_url.empty())
        throw InvalidArgumentError("--backend http needs TWS_API_BASE or --api-base");
    return std::make_unique<engine::HttpBackend>(std::move(o));
}

bench::EvalConfig make_config(const EvalArgs& a)
{
    bench::EvalConfig cfg;
    cfg.mode = engine::mode_from_string(a.mode);
    cfg.k_max = a.k_max;
    for (const auto& e: a.exclude)
        cfg.exclusions.push_back(ops::category_from_string(e));
    cfg.parallelism = a.parallelism;
    if (!a.trace_dir.empty())
        cfg.trace_dir = a.trace_dir;
    cfg.instruction = a.instruction;
    return cfg;
}

std::filesystem::path output_dir(const std::string& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw WriteError("cannot create " + dir + ": " + ec.message());
    return dir;
}

} // namespace tws::cli
