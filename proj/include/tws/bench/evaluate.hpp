// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/bench/manifest.hpp"
#include "tws/engine/backend.hpp"
#include "tws/engine/loop.hpp"
#include "tws/engine/prompt.hpp"
#include "tws/engine/trace.hpp"
#include "tws/ops/registry.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tws::bench
{

/// Bucket name for records without perturbations.
inline constexpr std::string_view kCleanBucket = "clean";

struct EvalConfig
{
    engine::RunMode mode = engine::RunMode::Tws;
    std::size_t k_max = engine::kDefaultMaxSteps;
    std::vector<ops::OperatorCategory> exclusions;
    /// Records run concurrently; further capped by the backend.
    std::size_t parallelism = 1;
    /// Traces go to <trace_dir>/<utterance_id>.json when set.
    std::optional<std::filesystem::path> trace_dir;
    std::string instruction;
    const engine::PromptTemplates* templates = nullptr;
};

struct EvalRecordResult
{
    std::string utterance_id;
    engine::Emotion true_label = engine::Emotion::Neutral;
    std::optional<engine::Emotion> predicted_label;
    bool correct = false;
    std::size_t steps_used = 0;
    std::vector<std::string> operators_invoked;
    std::vector<perturb::PerturbationKind> perturbation_kinds;
    engine::Termination terminated_by = engine::Termination::KMaxReached;
    /// Not part of any deterministic output.
    double wall_time_ms = 0.0;
};

struct EvalSummary
{
    engine::RunMode mode = engine::RunMode::Tws;
    std::size_t records = 0;
    std::size_t correct = 0;
    std::size_t backend_errors = 0;
    double overall_accuracy = 0.0;
    /// Perturbation kind name or "clean"; multi-kind records count in every bucket.
    std::map<std::string, double> accuracy_by_kind;
    /// Operator name -> share of all steps that invoked it.
    std::map<std::string, double> operator_usage;
    double mean_steps = 0.0;
    double mean_wall_time_ms = 0.0;
    // config snapshot
    std::size_t k_max = 0;
    std::string backend_id;
    std::vector<std::string> exclusions;
};

struct EvalRun
{
    EvalSummary summary;
    /// Same order as the input items.
    std::vector<EvalRecordResult> results;
};

/// Runs every item through run_baseline or run_tws (registry minus
/// `exclusions`) and aggregates in input order, so the summary does not depend
/// on parallelism. Backend failures count as incorrect and are tallied.
[[nodiscard]] EvalRun evaluate(std::span<const EvalItem> items, const engine::ModelBackend& backend,
                               const ops::OperatorRegistry& registry, const EvalConfig& config);

/// Rebuilds a summary from per-record results.
[[nodiscard]] EvalSummary summarize(std::span<const EvalRecordResult> results, engine::RunMode mode, std::size_t k_max,
                                    std::string backend_id, std::vector<std::string> exclusions);

/// Buckets of a result: its kind names, or "clean".
[[nodiscard]] std::vector<std::string> buckets_of(const EvalRecordResult& r);

} // namespace tws::bench
