// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/bench/evaluate.hpp"

#include <span>
#include <string>
#include <vector>

namespace tws::bench
{

struct AblationRow
{
    /// "full", "w/o <category>" or "baseline".
    std::string name;
    EvalSummary summary;
    /// Accuracy minus the full row's.
    double delta = 0.0;
};

/// Six evaluations: full registry, each category left out in turn (denoise,
/// enhance, normalize, analyze), and baseline mode.
[[nodiscard]] std::vector<AblationRow> ablate_operators(std::span<const EvalItem> items,
                                                        const engine::ModelBackend& backend,
                                                        const ops::OperatorRegistry& registry,
                                                        const EvalConfig& base);

struct SweepRow
{
    std::size_t k_max = 0;
    double accuracy = 0.0;
    double mean_steps = 0.0;
    double mean_wall_time_ms = 0.0;
};

/// One TwS evaluation per value. Throws InvalidArgumentError on an empty list or
/// a zero value.
[[nodiscard]] std::vector<SweepRow> sweep_kmax(std::span<const EvalItem> items, const engine::ModelBackend& backend,
                                               const ops::OperatorRegistry& registry,
                                               std::span<const std::size_t> values, const EvalConfig& base);

struct BucketBreakdown
{
    std::string bucket;
    std::size_t records = 0;
    double accuracy = 0.0;
    std::size_t steps = 0;
    /// Operator -> share of the bucket's steps that invoked it.
    std::map<std::string, double> operator_usage;
};

/// Per-kind buckets (multi-kind records count in each) in canonical kind
/// order, then "clean"; empty buckets are left out.
[[nodiscard]] std::vector<BucketBreakdown> breakdown_by_perturbation(std::span<const EvalRecordResult> results);

} // namespace tws::bench
