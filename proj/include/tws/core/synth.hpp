// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/rng.hpp"
#include "tws/core/waveform.hpp"

#include <cstddef>

namespace tws::synth
{

struct GateOptions
{
    double on_s = 0.25;
    double off_s = 0.15;
    double lead_s = 0.10;
    double ramp_s = 0.01;
};

/// Sinusoid switched on and off with raised-cosine ramps.
[[nodiscard]] Waveform tone_burst(double freq_hz, double duration_s, double amplitude = 0.5,
                                  const GateOptions& gate = {}, int rate = kCanonicalSampleRate);

/// Harmonic stack (1/k rolloff, up to `harmonics` partials below Nyquist)
/// with the same gating as tone_burst.
[[nodiscard]] Waveform tone_stack(double f0_hz, double duration_s, int harmonics = 10, double amplitude = 0.5,
                                  const GateOptions& gate = {}, int rate = kCanonicalSampleRate);

struct SpeechLikeOptions
{
    double f0_hz = 140.0;
    double duration_s = 1.5;
    double syllable_min_s = 0.18;
    double syllable_max_s = 0.30;
    double gap_min_s = 0.12;
    double gap_max_s = 0.20;
    double lead_s = 0.10;
    double peak = 0.5;
};

/// Syllable-like voiced bursts: gliding f0, two vowel formants per syllable,
/// attack/release envelopes, silent gaps between syllables.
[[nodiscard]] Waveform speech_like(const SpeechLikeOptions& options, Rng& rng, int rate = kCanonicalSampleRate);

/// Unit impulses every `period_s`, starting at `offset_s`.
[[nodiscard]] Waveform click_train(double period_s, double duration_s, double amplitude = 0.9, double offset_s = 0.05,
                                   int rate = kCanonicalSampleRate);

} // namespace tws::synth
