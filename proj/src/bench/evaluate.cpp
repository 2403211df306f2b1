// SPDX-License-Identifier: Apache-2.0
#include "tws/bench/evaluate.hpp"

#include "tws/core/error.hpp"
#include "tws/engine/loop.hpp"
#include "tws/engine/trace_io.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

namespace tws::bench
{

std::vector<std::string> buckets_of(const EvalRecordResult& r)
{
    if (r.perturbation_kinds.empty())
        return {std::string(kCleanBucket)};
    std::vector<std::string> out;
    for (auto k: r.perturbation_kinds)
    {
        std::string name(perturb::to_string(k));
        if (std::find(out.begin(), out.end(), name) == out.end())
            out.push_back(std::move(name));
    }
    return out;
}

EvalSummary summarize(std::span<const EvalRecordResult> results, engine::RunMode mode, std::size_t k_max,
                      std::string backend_id, std::vector<std::string> exclusions)
{
    EvalSummary s;
    s.mode = mode;
    s.k_max = k_max;
    s.backend_id = std::move(backend_id);
    s.exclusions = std::move(exclusions);
    s.records = results.size();

    std::map<std::string, std::pair<std::size_t, std::size_t>> by_kind;
    std::map<std::string, std::size_t> calls;
    std::size_t steps = 0;
    double wall = 0.0;
    for (const auto& r: results)
    {
        s.correct += r.correct ? 1 : 0;
        s.backend_errors += r.terminated_by == engine::Termination::BackendError ? 1 : 0;
        steps += r.steps_used;
        wall += r.wall_time_ms;
        for (const auto& b: buckets_of(r))
        {
            auto& [n, c] = by_kind[b];
            ++n;
            c += r.correct ? 1 : 0;
        }
        for (const auto& op: r.operators_invoked)
            ++calls[op];
    }
    if (s.records > 0)
    {
        const double n = static_cast<double>(s.records);
        s.overall_accuracy = static_cast<double>(s.correct) / n;
        s.mean_steps = static_cast<double>(steps) / n;
        s.mean_wall_time_ms = wall / n;
    }
    for (const auto& [b, nc]: by_kind)
        s.accuracy_by_kind[b] = static_cast<double>(nc.second) / static_cast<double>(nc.first);
    for (const auto& [op, n]: calls)
        s.operator_usage[op] = static_cast<double>(n) / static_cast<double>(steps);
    return s;
}

EvalRun evaluate(std::span<const EvalItem> items, const engine::ModelBackend& backend,
                 const ops::OperatorRegistry& registry, const EvalConfig& config)
{
    if (config.mode == engine::RunMode::Tws && config.k_max < 1)
        throw InvalidArgumentError("k_max must be at least 1");
    const auto filtered = registry.without(config.exclusions);
    if (config.trace_dir)
    {
        std::error_code ec;
        std::filesystem::create_directories(*config.trace_dir, ec);
        if (ec)
            throw WriteError("cannot create trace directory " + config.trace_dir->string() + ": " + ec.message());
    }

    std::vector<EvalRecordResult> results(items.size());
    const auto run_one = [&](std::size_t i) {
        const auto& item = items[i];
        engine::RunOptions opts;
        opts.k_max = config.k_max;
        opts.record_id = item.utterance_id;
        opts.templates = config.templates;
        const auto t0 = std::chrono::steady_clock::now();
        const auto trace = config.mode == engine::RunMode::Baseline
                               ? engine::run_baseline(item.audio, config.instruction, backend, opts)
                               : engine::run_tws(item.audio, config.instruction, filtered, backend, opts);
        const auto t1 = std::chrono::steady_clock::now();
        if (config.trace_dir)
            engine::write_trace(trace, engine::trace_path(*config.trace_dir, item.utterance_id));
        if (trace.terminated_by == engine::Termination::BackendError)
            spdlog::warn("record {}: backend error: {}", item.utterance_id, trace.error);

        auto& r = results[i];
        r.utterance_id = item.utterance_id;
        r.true_label = item.label;
        r.predicted_label = trace.final_answer;
        r.correct = trace.final_answer == item.label;
        r.steps_used = trace.steps_used;
        r.operators_invoked = trace.operators_invoked();
        r.perturbation_kinds = item.kinds;
        r.terminated_by = trace.terminated_by;
        r.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    };

    std::size_t workers = std::max<std::size_t>(config.parallelism, 1);
    if (backend.max_parallelism() > 0)
        workers = std::min(workers, backend.max_parallelism());
    workers = std::min(workers, std::max<std::size_t>(items.size(), 1));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < items.size(); ++i)
            run_one(i);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex mu;
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (std::size_t i; (i = next++) < items.size();)
                    {
                        try
                        {
                            run_one(i);
                        }
                        catch (...)
                        {
                            std::lock_guard lock(mu);
                            if (!failure)
                                failure = std::current_exception();
                            next = items.size();
                        }
                    }
                });
        }
        if (failure)
            std::rethrow_exception(failure);
    }

    std::vector<std::string> excluded;
    for (auto c: config.exclusions)
        excluded.emplace_back(ops::to_string(c));
    std::sort(excluded.begin(), excluded.end());
    excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
    const std::size_t k = config.mode == engine::RunMode::Baseline ? 1 : config.k_max;
    EvalRun run;
    run.summary = summarize(results, config.mode, k, backend.id(), std::move(excluded));
    run.results = std::move(results);
    return run;
}

} // namespace tws::bench
