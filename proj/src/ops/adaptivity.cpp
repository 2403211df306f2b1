// SPDX-License-Identifier: Apache-2.0
#include "tws/ops/adaptivity.hpp"

#include "tws/core/metrics.hpp"
#include "tws/perturb/hard_set.hpp"

#include <algorithm>
#include <string>

namespace tws::ops
{

namespace
{

using Probe = std::function<Waveform(const Waveform&, const Waveform&, const perturb::PerturbationSpec&)>;

AdaptivityReport run_trials(std::string_view name, const Probe& probe, perturb::PerturbationKind kind,
                            std::span<const Waveform> corpus, std::size_t trials, Rng& rng)
{
    if (trials < kMinAdaptivityTrials)
        throw InvalidArgumentError("adaptivity needs at least " + std::to_string(kMinAdaptivityTrials) + " trials");
    if (corpus.empty())
        throw InvalidArgumentError("adaptivity needs a non-empty corpus");

    AdaptivityReport rep;
    rep.operator_name = std::string(name);
    rep.perturbation_kind = kind;
    double ratio_sum = 0.0;
    for (std::size_t i = 0; i < trials; ++i)
    {
        const Waveform& x = corpus[i % corpus.size()];
        const auto spec = perturb::sample_spec(kind, {rng.next_u64(), i, perturb::kind_index(kind)});
        const Waveform y = perturb::apply_spec(x, spec).audio;
        const double delta = signal_distance(y, x).value;
        if (delta == 0.0)
        {
            ++rep.skipped;
            continue;
        }
        const double ratio = signal_distance(probe(y, x, spec), x).value / delta;
        rep.rho_estimate = std::max(rep.rho_estimate, ratio);
        rep.epsilon = std::max(rep.epsilon, delta);
        ratio_sum += ratio;
        ++rep.trials;
    }
    rep.mean_ratio = rep.trials ? ratio_sum / static_cast<double>(rep.trials) : 0.0;
    return rep;
}

} // namespace

ArgValues inverse_args(std::string_view op_name, const perturb::PerturbationSpec& spec)
{
    if (op_name == "correct_pitch")
        if (const auto* p = std::get_if<perturb::PitchShiftParams>(&spec.params))
            return {{"semitones", -p->semitones}};
    if (op_name == "restore_tempo")
        if (const auto* p = std::get_if<perturb::TimeStretchParams>(&spec.params))
            return {{"factor", p->stretch_factor}};
    return {};
}

AdaptivityReport measure_adaptivity(const OperatorRegistry& registry, std::string_view op_name,
                                    perturb::PerturbationKind kind, std::span<const Waveform> corpus,
                                    const AdaptivityOptions& options, Rng& rng)
{
    const auto& entry = registry.at(op_name);
    if (entry.descriptor.returns != OutputKind::Audio)
        throw InvalidArgumentError("operator " + entry.descriptor.name + " does not return audio");
    const std::string name = entry.descriptor.name;
    Probe probe = [&](const Waveform& y, const Waveform&, const perturb::PerturbationSpec& spec) {
        const ArgValues args = options.args == ArgPolicy::MatchedInverse ? inverse_args(name, spec) : ArgValues{};
        return *registry.invoke(name, y, args).audio;
    };
    return run_trials(name, probe, kind, corpus, options.trials, rng);
}

AdaptivityReport measure_adaptivity(std::string_view name, const AdaptivityProbe& probe,
                                    perturb::PerturbationKind kind, std::span<const Waveform> corpus,
                                    std::size_t trials, Rng& rng)
{
    return run_trials(
        name, [&](const Waveform& y, const Waveform& x, const perturb::PerturbationSpec&) { return probe(y, x); },
        kind, corpus, trials, rng);
}

} // namespace tws::ops
