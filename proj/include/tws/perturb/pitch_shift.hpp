// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"

#include <vector>

namespace tws::perturb
{

struct PitchShiftResult
{
    Waveform audio;
    /// True when no usable pitch marks were found and the resample path ran
    /// instead of PSOLA.
    bool used_fallback = false;
};

/// One analysis epoch.
struct PitchMark
{
    double position = 0.0;
    double period = 0.0;
    bool voiced = false;
};

/// Pitch-synchronous epoch marks from the autocorrelation pitch track
/// (60–400 Hz). Unvoiced stretches get fixed 10 ms marks.
[[nodiscard]] std::vector<PitchMark> find_pitch_marks(const Waveform& x);

/// preserve_formants: TD-PSOLA with Hann two-period grains, synthesis marks
/// respaced by 2^(−semitones/12) in voiced regions. Otherwise: resample by
/// 2^(−semitones/12), then phase-vocoder stretch back to the input duration.
/// The output always has the input's length.
///
/// Throws InvalidArgumentError for |semitones| > 12.
[[nodiscard]] PitchShiftResult pitch_shift(const Waveform& x, double semitones, bool preserve_formants);

} // namespace tws::perturb
