// SPDX-License-Identifier: Apache-2.0
#include "tws/bench/protocols.hpp"

#include "tws/core/error.hpp"

#include <fmt/format.h>

namespace tws::bench
{

std::vector<AblationRow> ablate_operators(std::span<const EvalItem> items, const engine::ModelBackend& backend,
                                          const ops::OperatorRegistry& registry, const EvalConfig& base)
{
    std::vector<AblationRow> rows;
    EvalConfig cfg = base;
    cfg.mode = engine::RunMode::Tws;
    cfg.exclusions.clear();
    rows.push_back({"full", evaluate(items, backend, registry, cfg).summary, 0.0});
    for (auto c: {ops::OperatorCategory::Denoise, ops::OperatorCategory::Enhance, ops::OperatorCategory::Normalize,
                  ops::OperatorCategory::Analyze})
    {
        cfg.exclusions = {c};
        rows.push_back({fmt::format("w/o {}", ops::to_string(c)), evaluate(items, backend, registry, cfg).summary});
    }
    cfg.exclusions.clear();
    cfg.mode = engine::RunMode::Baseline;
    rows.push_back({"baseline", evaluate(items, backend, registry, cfg).summary});
    for (auto& r: rows)
        r.delta = r.summary.overall_accuracy - rows.front().summary.overall_accuracy;
    return rows;
}

std::vector<SweepRow> sweep_kmax(std::span<const EvalItem> items, const engine::ModelBackend& backend,
                                 const ops::OperatorRegistry& registry, std::span<const std::size_t> values,
                                 const EvalConfig& base)
{
    if (values.empty())
        throw InvalidArgumentError("k_max sweep needs at least one value");
    std::vector<SweepRow> rows;
    for (auto k: values)
    {
        if (k < 1)
            throw InvalidArgumentError("k_max values must be at least 1");
        EvalConfig cfg = base;
        cfg.mode = engine::RunMode::Tws;
        cfg.k_max = k;
        const auto s = evaluate(items, backend, registry, cfg).summary;
        rows.push_back({k, s.overall_accuracy, s.mean_steps, s.mean_wall_time_ms});
    }
    return rows;
}

std::vector<BucketBreakdown> breakdown_by_perturbation(std::span<const EvalRecordResult> results)
{
    std::vector<std::string> order;
    for (auto k: perturb::kAllKinds)
        order.emplace_back(perturb::to_string(k));
    order.emplace_back(kCleanBucket);

    std::map<std::string, BucketBreakdown> buckets;
    std::map<std::string, std::map<std::string, std::size_t>> calls;
    std::map<std::string, std::size_t> correct;
    for (const auto& r: results)
        for (const auto& b: buckets_of(r))
        {
            auto& bd = buckets[b];
            bd.bucket = b;
            ++bd.records;
            bd.steps += r.steps_used;
            correct[b] += r.correct ? 1 : 0;
            for (const auto& op: r.operators_invoked)
                ++calls[b][op];
        }

    std::vector<BucketBreakdown> out;
    for (const auto& name: order)
    {
        const auto it = buckets.find(name);
        if (it == buckets.end())
            continue;
        auto bd = it->second;
        bd.accuracy = static_cast<double>(correct[name]) / static_cast<double>(bd.records);
        for (const auto& [op, n]: calls[name])
            bd.operator_usage[op] = static_cast<double>(n) / static_cast<double>(bd.steps);
        out.push_back(std::move(bd));
    }
    return out;
}

} // namespace tws::bench
