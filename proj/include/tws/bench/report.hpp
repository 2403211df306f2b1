// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/bench/evaluate.hpp"
#include "tws/bench/protocols.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace tws::bench
{

enum class ReportFormat
{
    Csv,
    Jsonl,
};

[[nodiscard]] ReportFormat report_format_from_string(std::string_view s);
[[nodiscard]] std::string_view extension(ReportFormat f) noexcept;

/// Floats carry 4 decimals; columns and keys keep a fixed order. Wall times
/// are left out so equal inputs give equal bytes (see write_timings).
[[nodiscard]] nlohmann::ordered_json to_json(const EvalSummary& s);
[[nodiscard]] EvalSummary summary_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::ordered_json to_json(const EvalRecordResult& r);
[[nodiscard]] EvalRecordResult result_from_json(const nlohmann::json& j);

void write_summaries(std::span<const EvalSummary> summaries, const std::filesystem::path& path, ReportFormat f);
void write_results(std::span<const EvalRecordResult> results, const std::filesystem::path& path, ReportFormat f);
void write_ablation(std::span<const AblationRow> rows, const std::filesystem::path& path, ReportFormat f);
/// Includes mean_wall_time_ms.
void write_sweep(std::span<const SweepRow> rows, const std::filesystem::path& path, ReportFormat f);
void write_breakdown(std::span<const BucketBreakdown> buckets, const std::filesystem::path& path, ReportFormat f);
/// CSV utterance_id,wall_time_ms.
void write_timings(std::span<const EvalRecordResult> results, const std::filesystem::path& path);

[[nodiscard]] std::vector<EvalSummary> read_summaries(const std::filesystem::path& jsonl);
[[nodiscard]] std::vector<EvalRecordResult> read_results(const std::filesystem::path& jsonl);

} // namespace tws::bench
