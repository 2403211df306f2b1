// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/rng.hpp"
#include "tws/ops/registry.hpp"
#include "tws/perturb/spec.hpp"

#include <functional>
#include <span>
#include <string>

namespace tws::ops
{

inline constexpr std::size_t kMinAdaptivityTrials = 30;

struct AdaptivityReport
{
    std::string operator_name;
    perturb::PerturbationKind perturbation_kind = perturb::PerturbationKind::AdditiveNoise;
    /// Largest perturbation norm seen.
    double epsilon = 0.0;
    /// Largest ||T(x + d) - x|| / ||d|| over trials.
    double rho_estimate = 0.0;
    double mean_ratio = 0.0;
    std::size_t trials = 0;
    std::size_t skipped = 0;
};

enum class ArgPolicy
{
    /// Every call uses the operator's defaults.
    Defaults,
    /// Corrective operators get the exact inverse of the sampled perturbation
    /// (correct_pitch <- -semitones, restore_tempo <- stretch_factor).
    MatchedInverse,
};

struct AdaptivityOptions
{
    std::size_t trials = kMinAdaptivityTrials;
    ArgPolicy args = ArgPolicy::Defaults;
};

/// Maps (perturbed, clean) to the operator output; lets tests plug in
/// operators that are not registry members.
using AdaptivityProbe = std::function<Waveform(const Waveform& perturbed, const Waveform& clean)>;

/// Trial i perturbs corpus[i % size] with a spec drawn from `rng`; trials
/// whose perturbation has zero norm are skipped and counted.
[[nodiscard]] AdaptivityReport measure_adaptivity(const OperatorRegistry& registry, std::string_view op_name,
                                                  perturb::PerturbationKind kind, std::span<const Waveform> corpus,
                                                  const AdaptivityOptions& options, Rng& rng);

[[nodiscard]] AdaptivityReport measure_adaptivity(std::string_view name, const AdaptivityProbe& probe,
                                                  perturb::PerturbationKind kind, std::span<const Waveform> corpus,
                                                  std::size_t trials, Rng& rng);

/// Arguments for `op_name` that invert `spec` under ArgPolicy::MatchedInverse.
[[nodiscard]] ArgValues inverse_args(std::string_view op_name, const perturb::PerturbationSpec& spec);

} // namespace tws::ops
