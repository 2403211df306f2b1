// SPDX-License-Identifier: Apache-2.0
#include "tws/perturb/spec.hpp"

#include "tws/core/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace tws::perturb
{

namespace
{

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

void check_range(double v, double lo, double hi, std::string_view name)
{
    if (!(v >= lo && v <= hi))
        throw InvalidArgumentError(std::string(name) + " out of range: " + std::to_string(v));
}

} // namespace

std::string_view to_string(PerturbationKind kind) noexcept
{
    switch (kind)
    {
        case PerturbationKind::AdditiveNoise: return "AdditiveNoise";
        case PerturbationKind::Reverberation: return "Reverberation";
        case PerturbationKind::PitchShift: return "PitchShift";
        case PerturbationKind::TimeStretch: return "TimeStretch";
    }
    return "?";
}

std::string_view short_name(PerturbationKind kind) noexcept
{
    switch (kind)
    {
        case PerturbationKind::AdditiveNoise: return "AN";
        case PerturbationKind::Reverberation: return "RE";
        case PerturbationKind::PitchShift: return "PS";
        case PerturbationKind::TimeStretch: return "TS";
    }
    return "?";
}

PerturbationKind kind_from_string(std::string_view name)
{
    const auto n = lower(name);
    for (auto k: kAllKinds)
        if (n == lower(to_string(k)) || n == lower(short_name(k)))
            return k;
    if (n == "additive_noise")
        return PerturbationKind::AdditiveNoise;
    if (n == "reverb")
        return PerturbationKind::Reverberation;
    if (n == "pitch_shift")
        return PerturbationKind::PitchShift;
    if (n == "time_stretch")
        return PerturbationKind::TimeStretch;
    throw InvalidArgumentError("unknown perturbation kind: " + std::string(name));
}

std::size_t kind_index(PerturbationKind kind) noexcept
{
    return static_cast<std::size_t>(kind);
}

std::string_view to_string(NoiseType t) noexcept
{
    switch (t)
    {
        case NoiseType::White: return "white";
        case NoiseType::Pink: return "pink";
        case NoiseType::Brown: return "brown";
    }
    return "?";
}

NoiseType noise_type_from_string(std::string_view s)
{
    const auto n = lower(s);
    if (n == "white")
        return NoiseType::White;
    if (n == "pink")
        return NoiseType::Pink;
    if (n == "brown")
        return NoiseType::Brown;
    throw InvalidArgumentError("unknown noise type: " + std::string(s));
}

std::string_view to_string(StretchQuality q) noexcept
{
    return q == StretchQuality::High ? "high" : "fast";
}

StretchQuality quality_from_string(std::string_view s)
{
    const auto n = lower(s);
    if (n == "high")
        return StretchQuality::High;
    if (n == "fast")
        return StretchQuality::Fast;
    throw InvalidArgumentError("unknown quality mode: " + std::string(s));
}

void validate(const PerturbationSpec& spec)
{
    using R = ParameterRanges;
    if (spec.params.index() != kind_index(spec.kind))
        throw InvalidArgumentError("parameters do not match perturbation kind " + std::string(to_string(spec.kind)));
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AdditiveNoiseParams>)
                check_range(p.snr_db, R::kSnrMinDb, R::kSnrMaxDb, "snr_db");
            else if constexpr (std::is_same_v<T, ReverbParams>)
            {
                check_range(p.rt60_ms, R::kRt60MinMs, R::kRt60MaxMs, "rt60_ms");
                check_range(p.room_size_m3, R::kRoomMinM3, R::kRoomMaxM3, "room_size_m3");
            }
            else if constexpr (std::is_same_v<T, PitchShiftParams>)
                check_range(p.semitones, -R::kSemitonesMax, R::kSemitonesMax, "semitones");
            else
                check_range(p.stretch_factor, R::kStretchMin, R::kStretchMax, "stretch_factor");
        },
        spec.params);
}

std::vector<std::uint64_t> spec_seed_path(std::uint64_t master_seed, std::string_view utterance_id,
                                          PerturbationKind kind)
{
    return {master_seed, stable_hash32(utterance_id), kind_index(kind)};
}

Rng parameter_stream(std::span<const std::uint64_t> seed_path)
{
    std::vector<std::uint64_t> path(seed_path.begin(), seed_path.end());
    path.push_back(0);
    return Rng::substream(path);
}

Rng realization_stream(std::span<const std::uint64_t> seed_path)
{
    std::vector<std::uint64_t> path(seed_path.begin(), seed_path.end());
    path.push_back(1);
    return Rng::substream(path);
}

PerturbationSpec sample_spec(PerturbationKind kind, Rng& rng)
{
    using R = ParameterRanges;
    PerturbationSpec spec;
    spec.kind = kind;
    switch (kind)
    {
        case PerturbationKind::AdditiveNoise: {
            AdditiveNoiseParams p;
            p.snr_db = rng.uniform(R::kSnrMinDb, R::kSnrMaxDb);
            p.noise_type = static_cast<NoiseType>(rng.uniform_int(0, 2));
            p.temporal_mask = rng.bernoulli(R::kTemporalMaskProb);
            spec.params = p;
            break;
        }
        case PerturbationKind::Reverberation: {
            ReverbParams p;
            p.rt60_ms = std::exp(rng.uniform(std::log(R::kRt60MinMs), std::log(R::kRt60MaxMs)));
            p.rt60_ms = std::clamp(p.rt60_ms, R::kRt60MinMs, R::kRt60MaxMs);
            p.room_size_m3 = rng.uniform(R::kRoomMinM3, R::kRoomMaxM3);
            spec.params = p;
            break;
        }
        case PerturbationKind::PitchShift: {
            PitchShiftParams p;
            p.semitones = rng.uniform(-R::kSemitonesMax, R::kSemitonesMax);
            p.formant_preservation = rng.bernoulli(R::kFormantPreservationProb);
            spec.params = p;
            break;
        }
        case PerturbationKind::TimeStretch: {
            TimeStretchParams p;
            p.stretch_factor = rng.uniform(R::kStretchMin, R::kStretchMax);
            p.quality_mode = rng.bernoulli(R::kHighQualityProb) ? StretchQuality::High : StretchQuality::Fast;
            spec.params = p;
            break;
        }
    }
    return spec;
}

PerturbationSpec sample_spec(PerturbationKind kind, std::vector<std::uint64_t> seed_path)
{
    Rng rng = parameter_stream(seed_path);
    PerturbationSpec spec = sample_spec(kind, rng);
    spec.seed_path = std::move(seed_path);
    return spec;
}

nlohmann::ordered_json to_json(const PerturbationSpec& spec)
{
    nlohmann::ordered_json params;
    std::visit(
        [&params](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AdditiveNoiseParams>)
            {
                params["snr_db"] = p.snr_db;
                params["noise_type"] = to_string(p.noise_type);
                params["temporal_mask"] = p.temporal_mask;
            }
            else if constexpr (std::is_same_v<T, ReverbParams>)
            {
                params["rt60_ms"] = p.rt60_ms;
                params["room_size_m3"] = p.room_size_m3;
            }
            else if constexpr (std::is_same_v<T, PitchShiftParams>)
            {
                params["semitones"] = p.semitones;
                params["formant_preservation"] = p.formant_preservation;
            }
            else
            {
                params["stretch_factor"] = p.stretch_factor;
                params["quality_mode"] = to_string(p.quality_mode);
            }
        },
        spec.params);
    nlohmann::ordered_json j;
    j["kind"] = to_string(spec.kind);
    j["params"] = std::move(params);
    j["seed_path"] = spec.seed_path;
    return j;
}

PerturbationSpec spec_from_json(const nlohmann::json& j)
{
    try
    {
        PerturbationSpec spec;
        spec.kind = kind_from_string(j.at("kind").get<std::string>());
        const auto& p = j.at("params");
        switch (spec.kind)
        {
            case PerturbationKind::AdditiveNoise:
                spec.params = AdditiveNoiseParams{p.at("snr_db").get<double>(),
                                                  noise_type_from_string(p.at("noise_type").get<std::string>()),
                                                  p.value("temporal_mask", false)};
                break;
            case PerturbationKind::Reverberation:
                spec.params = ReverbParams{p.at("rt60_ms").get<double>(), p.at("room_size_m3").get<double>()};
                break;
            case PerturbationKind::PitchShift:
                spec.params = PitchShiftParams{p.at("semitones").get<double>(), p.value("formant_preservation", true)};
                break;
            case PerturbationKind::TimeStretch:
                spec.params = TimeStretchParams{p.at("stretch_factor").get<double>(),
                                                quality_from_string(p.value("quality_mode", std::string("high")))};
                break;
        }
        if (j.contains("seed_path"))
            spec.seed_path = j.at("seed_path").get<std::vector<std::uint64_t>>();
        return spec;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw DataError(std::string("malformed perturbation spec: ") + e.what());
    }
    catch (const InvalidArgumentError& e)
    {
        throw DataError(std::string("malformed perturbation spec: ") + e.what());
    }
}

} // namespace tws::perturb
