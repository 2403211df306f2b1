// SPDX-License-Identifier: Apache-2.0
#include "tws/core/metrics.hpp"

#include "tws/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tws
{

double measure_snr(const Waveform& clean, const Waveform& noisy)
{
    if (clean.sample_rate() != noisy.sample_rate())
        throw SampleRateMismatchError(clean.sample_rate(), noisy.sample_rate());
    if (clean.size() != noisy.size())
        throw LengthMismatchError(clean.size(), noisy.size());
    const double p_clean = signal_power(clean.samples());
    if (p_clean == 0.0)
        throw ZeroPowerError("SNR undefined for a zero-power reference");
    double residual = 0.0;
    for (std::size_t i = 0; i < clean.size(); ++i)
    {
        const double d = noisy[i] - clean[i];
        residual += d * d;
    }
    if (residual == 0.0)
        return std::numeric_limits<double>::infinity();
    residual /= static_cast<double>(clean.size());
    return 10.0 * std::log10(p_clean / residual);
}

SignalDistance signal_distance(const Waveform& a, const Waveform& b)
{
    if (a.sample_rate() != b.sample_rate())
        throw SampleRateMismatchError(a.sample_rate(), b.sample_rate());
    const std::size_t n = std::max(a.size(), b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double d = (i < a.size() ? a[i] : 0.0) - (i < b.size() ? b[i] : 0.0);
        acc += d * d;
    }
    return {std::sqrt(acc)};
}

} // namespace tws
