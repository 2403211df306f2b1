// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"
#include "tws/perturb/spec.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tws::perturb
{

struct AppliedAudio
{
    Waveform audio;
    bool pitch_fallback = false;
};

/// Applies one spec; the realisation (noise, room response, mask) comes from
/// the spec's seed path, so the result depends only on (x, spec).
[[nodiscard]] AppliedAudio apply_spec(const Waveform& x, const PerturbationSpec& spec);

/// Applies specs in the order given.
[[nodiscard]] AppliedAudio apply_specs(const Waveform& x, std::span<const PerturbationSpec> specs);

/// One row of a source manifest.
struct SourceRecord
{
    std::string utterance_id;
    std::string source_path;
    std::string label;
};

struct HardSetRecord
{
    std::string utterance_id;
    std::string source_path;
    std::string output_path;
    std::string label;
    std::vector<PerturbationSpec> applied_specs;
    /// Both inclusion rolls came up empty and the clip was copied through.
    bool clean_passthrough = false;
    bool pitch_fallback = false;
};

struct HardSetManifest
{
    std::vector<HardSetRecord> records;
    std::uint64_t master_seed = 1337;
};

inline constexpr std::uint64_t kDefaultPerturbationSeed = 1337;
inline constexpr double kDefaultApplyProbability = 0.3;

struct KindSelection
{
    std::vector<PerturbationKind> first_roll;
    std::vector<PerturbationKind> kinds;
    bool rerolled = false;
};

/// Independent Bernoulli(p[kind]) inclusion per kind, keyed by
/// (master_seed, utterance_id, kind); an empty first roll is re-rolled once.
[[nodiscard]] KindSelection select_kinds(std::uint64_t master_seed, std::string_view utterance_id,
                                         const std::array<double, 4>& probabilities);

struct HardSetOptions
{
    std::uint64_t master_seed = kDefaultPerturbationSeed;
    double p_apply = kDefaultApplyProbability;
    /// Overrides p_apply per kind (canonical order) when set.
    std::optional<std::array<double, 4>> kind_probabilities;
    std::size_t parallelism = 1;
};

/// Builds the perturbed corpus into `output_dir` (<utterance_id>.wav per record)
/// and returns its manifest. Unreadable sources are logged and skipped; an
/// unwritable output directory throws WriteError.
[[nodiscard]] HardSetManifest build_hard_set(std::span<const SourceRecord> sources,
                                             const std::filesystem::path& output_dir, const HardSetOptions& options = {});

/// Manifest files store paths below their own directory relative to it, so a
/// corpus can move as a whole; relative paths are resolved against that
/// directory on read.
[[nodiscard]] std::vector<SourceRecord> read_source_manifest(const std::filesystem::path& path);
void write_source_manifest(std::span<const SourceRecord> records, const std::filesystem::path& path);

[[nodiscard]] nlohmann::ordered_json to_json(const HardSetRecord& record);
[[nodiscard]] HardSetRecord hard_set_record_from_json(const nlohmann::json& j);

/// JSON Lines, one record per line, in record order.
void write_hard_set_manifest(const HardSetManifest& manifest, const std::filesystem::path& path);
[[nodiscard]] HardSetManifest read_hard_set_manifest(const std::filesystem::path& path);

} // namespace tws::perturb
