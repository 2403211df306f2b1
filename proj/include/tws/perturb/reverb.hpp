// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/rng.hpp"
#include "tws/core/waveform.hpp"

#include <cstddef>

namespace tws::perturb
{

inline constexpr double kSpeedOfSoundMs = 343.0;

/// Direct-path delay in samples: cbrt(volume) / 343 seconds.
[[nodiscard]] std::size_t room_predelay_samples(double room_size_m3, int sample_rate_hz);

/// Direct-to-reverberant ratio in dB, falling linearly from +6 dB at 20 m³ to
/// −2 dB at 200 m³.
[[nodiscard]] double room_drr_db(double room_size_m3) noexcept;

/// Total response length: pre-delay + 1.5·RT60.
[[nodiscard]] std::size_t room_ir_length(double rt60_ms, double room_size_m3, int sample_rate_hz);

/// Schroeder-style impulse response: zeros for the pre-delay, a unit direct
/// impulse, then a Gaussian tail decaying 60 dB per RT60, scaled to the room's
/// direct-to-reverberant ratio and truncated at 1.5·RT60.
[[nodiscard]] Waveform synth_room_ir(double rt60_ms, double room_size_m3, Rng& rng,
                                     int sample_rate_hz = kCanonicalSampleRate);

/// Full FFT convolution (length len(x) + len(ir) − 1), peak-normalised to the
/// input's peak.
[[nodiscard]] Waveform apply_reverb(const Waveform& x, const Waveform& ir);

} // namespace tws::perturb
