// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/rng.hpp"
#include "tws/core/waveform.hpp"
#include "tws/perturb/spec.hpp"

#include <cstddef>
#include <optional>

namespace tws::perturb
{

/// Unit-RMS noise. White is i.i.d. Gaussian; pink and brown scale the DFT
/// magnitudes of white noise by f^(−1/2) and f^(−1) (power ∝ 1/f and 1/f²),
/// keep the random phases and zero the DC bin.
///
/// Throws InvalidArgumentError for length < 256.
[[nodiscard]] Waveform gen_colored_noise(std::size_t length, NoiseType type, Rng& rng,
                                         int sample_rate_hz = kCanonicalSampleRate);

/// Contiguous region the noise is confined to under temporal masking.
struct NoiseSegment
{
    std::size_t start = 0;
    std::size_t length = 0;
};

/// Segment length uniform in [20 %, 80 %] of the clip, start uniform over the
/// valid positions.
[[nodiscard]] NoiseSegment draw_noise_segment(std::size_t clip_length, Rng& rng);

/// x + α·n with α chosen so that the SNR over the gated region (the whole clip
/// when `gate` is empty) equals snr_db. Noise outside the gate is exactly zero.
///
/// Throws ZeroPowerError when x has no power or the noise has none in the gate.
[[nodiscard]] Waveform mix_at_snr(const Waveform& x, const Waveform& noise, double snr_db,
                                  std::optional<NoiseSegment> gate = std::nullopt);

/// Draws the noise (and mask segment when active) from `rng` and mixes.
[[nodiscard]] Waveform add_noise_at_snr(const Waveform& x, const AdditiveNoiseParams& params, Rng& rng);

} // namespace tws::perturb
