// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/stft.hpp"
#include "tws/core/waveform.hpp"

namespace tws::ops
{

struct HpssOptions
{
    std::size_t time_kernel = 17;
    std::size_t freq_kernel = 17;
    double mask_power = 2.0;
    StftParams stft{};
};

/// Harmonic part of a median-filter harmonic/percussive split, used as a
/// voice proxy. Needs at least 8 STFT frames of input.
[[nodiscard]] Waveform extract_voice(const Waveform& x, const HpssOptions& options = {});

} // namespace tws::ops
