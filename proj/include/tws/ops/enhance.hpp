// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/stft.hpp"
#include "tws/core/waveform.hpp"
#include "tws/perturb/pitch_shift.hpp"

#include <cstddef>

namespace tws::ops
{

inline constexpr double kDefaultOverSubtraction = 1.5;
inline constexpr double kMinOverSubtraction = 0.5;
inline constexpr double kMaxOverSubtraction = 4.0;
inline constexpr double kDefaultLoudnessDbfs = -23.0;

struct DenoiseOptions
{
    double over_subtraction = kDefaultOverSubtraction;
    double percentile = 10.0;
    double spectral_floor = 0.05;
    /// Frames on each side of the current frame used for the percentile;
    /// 0 means the whole clip.
    std::size_t context_frames = 20;
    StftParams stft{};
};

/// Spectral subtraction against a per-bin low-percentile noise profile.
[[nodiscard]] Waveform denoise(const Waveform& x, double over_subtraction = kDefaultOverSubtraction);
[[nodiscard]] Waveform denoise(const Waveform& x, const DenoiseOptions& options);

struct DereverbOptions
{
    double decay = 0.85;
    std::size_t lag_frames = 2;
    double floor = 0.1;
    /// Scale applied to the late-reverb power estimate before subtraction.
    double strength = 1.0;
    /// A bin counts as free decay when its power is falling and below this
    /// fraction of the late estimate; only those bins are suppressed.
    double decay_gate = 0.5;
    StftParams stft{};
};

/// Late-reverberation suppression: bins in free decay have an exponentially
/// weighted trailing estimate of earlier frames removed. Sustained and rising
/// bins pass unchanged.
[[nodiscard]] Waveform dereverb(const Waveform& x, const DereverbOptions& options = {});

/// Scalar gain to the target RMS level, then hard clipping to [-1, 1].
[[nodiscard]] Waveform normalize_loudness(const Waveform& x, double target_dbfs = kDefaultLoudnessDbfs);

/// Formant-preserving pitch shift meant to undo a pitch corruption.
[[nodiscard]] perturb::PitchShiftResult correct_pitch(const Waveform& x, double semitones);

/// Undoes a time-stretch by `factor` (the corrupting factor, so 1.3 means the
/// input was sped up by 1.3); output length ~ len(x) * factor.
[[nodiscard]] Waveform restore_tempo(const Waveform& x, double factor);

} // namespace tws::ops
