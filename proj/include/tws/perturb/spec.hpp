// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/rng.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tws::perturb
{

enum class PerturbationKind
{
    AdditiveNoise,
    Reverberation,
    PitchShift,
    TimeStretch,
};

/// Canonical application order.
inline constexpr std::array<PerturbationKind, 4> kAllKinds = {
    PerturbationKind::AdditiveNoise,
    PerturbationKind::Reverberation,
    PerturbationKind::PitchShift,
    PerturbationKind::TimeStretch,
};

[[nodiscard]] std::string_view to_string(PerturbationKind kind) noexcept;
/// "AN", "RE", "PS", "TS".
[[nodiscard]] std::string_view short_name(PerturbationKind kind) noexcept;
/// Accepts the full names and the two-letter abbreviations.
[[nodiscard]] PerturbationKind kind_from_string(std::string_view name);
[[nodiscard]] std::size_t kind_index(PerturbationKind kind) noexcept;

enum class NoiseType
{
    White,
    Pink,
    Brown,
};

enum class StretchQuality
{
    Fast,
    High,
};

[[nodiscard]] std::string_view to_string(NoiseType t) noexcept;
[[nodiscard]] NoiseType noise_type_from_string(std::string_view s);
[[nodiscard]] std::string_view to_string(StretchQuality q) noexcept;
[[nodiscard]] StretchQuality quality_from_string(std::string_view s);

struct AdditiveNoiseParams
{
    double snr_db = 10.0;
    NoiseType noise_type = NoiseType::White;
    bool temporal_mask = false;
    friend bool operator==(const AdditiveNoiseParams&, const AdditiveNoiseParams&) = default;
};

struct ReverbParams
{
    double rt60_ms = 400.0;
    double room_size_m3 = 50.0;
    friend bool operator==(const ReverbParams&, const ReverbParams&) = default;
};

struct PitchShiftParams
{
    double semitones = 0.0;
    bool formant_preservation = true;
    friend bool operator==(const PitchShiftParams&, const PitchShiftParams&) = default;
};

struct TimeStretchParams
{
    double stretch_factor = 1.0;
    StretchQuality quality_mode = StretchQuality::High;
    friend bool operator==(const TimeStretchParams&, const TimeStretchParams&) = default;
};

using PerturbationParams = std::variant<AdditiveNoiseParams, ReverbParams, PitchShiftParams, TimeStretchParams>;

/// One concrete draw of a perturbation. `seed_path` names the random substream
/// that produced the parameters; the same path also seeds the realisation
/// (noise samples, room response, mask position).
struct PerturbationSpec
{
    PerturbationKind kind = PerturbationKind::AdditiveNoise;
    PerturbationParams params;
    std::vector<std::uint64_t> seed_path;

    friend bool operator==(const PerturbationSpec&, const PerturbationSpec&) = default;
};

/// Parameter ranges of the hard-set recipe.
struct ParameterRanges
{
    static constexpr double kSnrMinDb = 0.0;
    static constexpr double kSnrMaxDb = 25.0;
    static constexpr double kTemporalMaskProb = 0.2;
    static constexpr double kRt60MinMs = 100.0;
    static constexpr double kRt60MaxMs = 800.0;
    static constexpr double kRoomMinM3 = 20.0;
    static constexpr double kRoomMaxM3 = 200.0;
    static constexpr double kSemitonesMax = 4.0;
    static constexpr double kFormantPreservationProb = 0.7;
    static constexpr double kStretchMin = 0.7;
    static constexpr double kStretchMax = 1.3;
    static constexpr double kHighQualityProb = 0.8;
};

/// Throws InvalidArgumentError when parameters fall outside the recipe ranges
/// or do not match the kind.
void validate(const PerturbationSpec& spec);

[[nodiscard]] std::vector<std::uint64_t> spec_seed_path(std::uint64_t master_seed, std::string_view utterance_id,
                                                        PerturbationKind kind);

/// Stream the parameters are drawn from.
[[nodiscard]] Rng parameter_stream(std::span<const std::uint64_t> seed_path);
/// Stream the signal realisation is drawn from.
[[nodiscard]] Rng realization_stream(std::span<const std::uint64_t> seed_path);

/// Draws parameters per the recipe distributions: uniform SNR, room size,
/// semitones and stretch; log-uniform RT60; equal-weight noise type;
/// Bernoulli mask (0.2), formant preservation (0.7) and high quality (0.8).
[[nodiscard]] PerturbationSpec sample_spec(PerturbationKind kind, Rng& rng);

/// sample_spec on the parameter stream of `seed_path`, recording the path.
[[nodiscard]] PerturbationSpec sample_spec(PerturbationKind kind, std::vector<std::uint64_t> seed_path);

[[nodiscard]] nlohmann::ordered_json to_json(const PerturbationSpec& spec);
[[nodiscard]] PerturbationSpec spec_from_json(const nlohmann::json& j);

} // namespace tws::perturb
