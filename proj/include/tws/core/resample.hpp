// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace tws
{

/// Band-limited interpolation with a Kaiser-windowed sinc (β = 8).
///
/// Produces `out_len` samples where output sample n reads the input at time
/// n / ratio. A ratio below one lowers the cutoff to avoid aliasing.
[[nodiscard]] std::vector<double> resample_ratio(std::span<const double> x, double ratio, std::size_t out_len);

/// Sample-rate conversion; identity when the rate already matches.
[[nodiscard]] Waveform resample(const Waveform& w, int target_rate_hz);

/// Converts to the canonical 16 kHz rate when needed.
[[nodiscard]] Waveform to_canonical_rate(const Waveform& w);

} // namespace tws
