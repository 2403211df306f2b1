// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/ops/adaptivity.hpp"
#include "tws/ops/registry.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace tws::theory
{

inline constexpr std::size_t kMinCoveringCorpus = 10;
inline constexpr double kCoveringCorpusSeconds = 3.0;

/// Tones, harmonic stacks and speech-like clips, 3 s each at 16 kHz.
[[nodiscard]] std::vector<Waveform> covering_corpus(std::uint64_t seed, std::size_t size = 12);

struct CoveringOptions
{
    std::size_t trials = ops::kMinAdaptivityTrials;
    std::uint64_t seed = 0;
    ops::ArgPolicy args = ops::ArgPolicy::Defaults;
    std::size_t workers = 1;
};

struct KindVerdict
{
    perturb::PerturbationKind kind = perturb::PerturbationKind::AdditiveNoise;
    bool covered = false;
    /// Operator with the smallest rho estimate.
    std::string best_operator;
    double best_rho = 0.0;
};

struct CoveringMatrix
{
    std::vector<std::string> operators;
    std::vector<perturb::PerturbationKind> kinds;
    /// Row-major: cells[op * kinds.size() + kind].
    std::vector<ops::AdaptivityReport> cells;
    std::vector<KindVerdict> verdicts;

    [[nodiscard]] const ops::AdaptivityReport& at(std::string_view op, perturb::PerturbationKind kind) const;
};

/// Measures every audio-returning operator against every kind. Cell (op, kind)
/// draws from the substream (seed, hash(op), kind), so the matrix does not
/// depend on `workers` or on which other operators are present.
[[nodiscard]] CoveringMatrix covering_study(const ops::OperatorRegistry& registry,
                                            std::span<const perturb::PerturbationKind> kinds,
                                            std::span<const Waveform> corpus, const CoveringOptions& options);

/// CSV with columns operator,kind,rho_estimate,epsilon,trials.
void write_csv(std::ostream& out, const CoveringMatrix& m);

} // namespace tws::theory
