// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"
#include "tws/engine/oracle_backend.hpp"
#include "tws/engine/trace.hpp"
#include "tws/perturb/hard_set.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace tws::bench
{

inline constexpr double kSyntheticSeconds = 2.0;

/// Speech-like clip whose f0 range and syllable timing depend on the label.
[[nodiscard]] Waveform synthetic_utterance(engine::Emotion label, std::uint64_t seed, std::size_t index);

/// Writes <dir>/audio/syn_NNNN.wav and <dir>/labels.csv for `count` clips with
/// labels cycling through the categories; returns the source records.
std::vector<perturb::SourceRecord> write_synthetic_corpus(const std::filesystem::path& dir, std::size_t count,
                                                          std::uint64_t seed);

using TruthTable = std::map<std::string, engine::OracleTruth, std::less<>>;

/// Hidden truths for the oracle backend: each record's label, specs and the
/// clean source audio measured by make_truth.
[[nodiscard]] TruthTable oracle_truths(const perturb::HardSetManifest& manifest);
[[nodiscard]] TruthTable oracle_truths(std::span<const perturb::SourceRecord> sources);

} // namespace tws::bench
