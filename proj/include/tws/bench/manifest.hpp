// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"
#include "tws/engine/trace.hpp"
#include "tws/perturb/hard_set.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tws::bench
{

/// Reads `labels_file` (CSV, header utterance_id,label) and resolves each id to
/// <audio_dir>/<id>.wav. Rows keep file order.
///
/// Throws DataError naming the row for unknown labels, missing audio, duplicate
/// ids or a bad header; FileNotFoundError when the labels file is missing.
[[nodiscard]] std::vector<perturb::SourceRecord> build_manifest(const std::filesystem::path& audio_dir,
                                                                const std::filesystem::path& labels_file);

/// One clip as the evaluator sees it.
struct EvalItem
{
    std::string utterance_id;
    engine::Emotion label = engine::Emotion::Neutral;
    Waveform audio;
    std::vector<perturb::PerturbationKind> kinds;
};

/// Loads the perturbed audio of every hard-set record. Throws DataError on an
/// unknown label.
[[nodiscard]] std::vector<EvalItem> load_eval_items(const perturb::HardSetManifest& manifest);

/// Source records evaluated as they are (no perturbation).
[[nodiscard]] std::vector<EvalItem> load_eval_items(std::span<const perturb::SourceRecord> sources);

} // namespace tws::bench
