// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"

#include <cstddef>
#include <vector>

namespace tws
{

struct PitchTrackerOptions
{
    double frame_s = 0.025;
    double hop_s = 0.010;
    double min_hz = 60.0;
    double max_hz = 400.0;
    /// Minimum normalised autocorrelation peak for a frame to count as voiced.
    double voicing_threshold = 0.5;
    /// Frames this many dB below the loudest frame are unvoiced.
    double silence_gate_db = 30.0;
};

/// Per-frame fundamental frequency; 0 marks an unvoiced frame.
struct PitchContour
{
    std::vector<double> f0_hz;
    std::size_t frame_len = 0;
    std::size_t hop = 0;
    int sample_rate = kCanonicalSampleRate;

    [[nodiscard]] double median_voiced_hz() const;
    [[nodiscard]] double voiced_fraction() const;
    /// Centre sample of frame i.
    [[nodiscard]] double frame_center(std::size_t i) const noexcept;
};

/// Autocorrelation pitch tracker with parabolic refinement of the lag peak.
/// Throws SignalTooShortError when shorter than one analysis frame.
[[nodiscard]] PitchContour track_pitch(const Waveform& w, const PitchTrackerOptions& options = {});

} // namespace tws
