// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"

#include <compare>

namespace tws
{

/// L2 norm of the sample-wise difference between two waveforms after the
/// shorter one is zero-padded to the longer length.
struct SignalDistance
{
    double value = 0.0;

    friend auto operator<=>(const SignalDistance&, const SignalDistance&) = default;
};

/// 10·log10(power(clean) / power(noisy − clean)). Returns +∞ when the residual
/// is exactly zero. Lengths and rates must match.
[[nodiscard]] double measure_snr(const Waveform& clean, const Waveform& noisy);

[[nodiscard]] SignalDistance signal_distance(const Waveform& a, const Waveform& b);

} // namespace tws
