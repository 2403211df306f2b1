// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/pitch.hpp"
#include "tws/core/waveform.hpp"

#include <string>

namespace tws::ops
{

inline constexpr double kMaxReportedSnrDb = 120.0;

/// Measured features only. rms_dbfs is -inf for an all-zero signal; every
/// other field is finite.
struct FeatureReport
{
    double estimated_snr_db = 0.0;
    double spectral_centroid_hz = 0.0;
    double spectral_rolloff_hz = 0.0;
    double spectral_flatness = 0.0;
    double rms_dbfs = 0.0;
    double f0_median_hz = 0.0;
    double voiced_fraction = 0.0;
    double duration_s = 0.0;
};

/// Mean frame power over the 10th-percentile frame power, in dB, capped at
/// kMaxReportedSnrDb (digital silence in the quietest frames).
[[nodiscard]] double estimate_snr_db(const Waveform& x);

[[nodiscard]] FeatureReport analyze_spectrum(const Waveform& x);

/// Single-line key=value rendering; the exact format is what models see.
[[nodiscard]] std::string render(const FeatureReport& r);
[[nodiscard]] std::string render(const PitchContour& c);

/// "AUDIO_UPDATED duration_s=<s> rms_dbfs=<db>"
[[nodiscard]] std::string render_audio_update(const Waveform& w);

} // namespace tws::ops
