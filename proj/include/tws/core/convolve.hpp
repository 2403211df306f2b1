// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace tws
{

/// Full linear convolution via zero-padded FFT; length a + b − 1.
[[nodiscard]] std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b);

} // namespace tws
