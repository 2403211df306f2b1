// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"
#include "tws/perturb/spec.hpp"

#include <cstddef>

namespace tws::perturb
{

struct VocoderConfig
{
    std::size_t window = 2048;
    std::size_t synthesis_hop = 512;
    bool phase_locking = true;
};

/// high: 2048-sample window, identity phase locking; fast: 1024, no locking.
/// Both use a 512-sample synthesis hop.
[[nodiscard]] VocoderConfig vocoder_config(StretchQuality quality) noexcept;

inline constexpr double kMinStretchFactor = 0.25;
inline constexpr double kMaxStretchFactor = 4.0;

/// Phase-vocoder time-scale modification. A factor above one plays faster: the
/// output holds round(len / factor) samples. Pitch is preserved.
///
/// Throws InvalidArgumentError for a factor outside [0.25, 4].
[[nodiscard]] Waveform time_stretch(const Waveform& x, double factor, StretchQuality quality);

} // namespace tws::perturb
