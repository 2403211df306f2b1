// SPDX-License-Identifier: Apache-2.0
#include "tws/core/waveform.hpp"

#include "tws/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tws
{

Waveform::Waveform(std::vector<double> samples, int sample_rate_hz):
    _samples(std::move(samples)), _sample_rate(sample_rate_hz)
{
    if (_sample_rate <= 0)
        throw InvalidArgumentError("sample rate must be positive, got " + std::to_string(_sample_rate));
    for (std::size_t i = 0; i < _samples.size(); ++i)
        if (!std::isfinite(_samples[i]))
            throw InvalidArgumentError("non-finite sample at index " + std::to_string(i));
}

Waveform Waveform::zeros(std::size_t length, int sample_rate_hz)
{
    return Waveform(std::vector<double>(length, 0.0), sample_rate_hz);
}

double Waveform::duration_s() const noexcept
{
    return static_cast<double>(_samples.size()) / _sample_rate;
}

std::vector<double> Waveform::release() &&
{
    return std::move(_samples);
}

double signal_power(std::span<const double> x) noexcept
{
    if (x.empty())
        return 0.0;
    double acc = 0.0;
    for (double v: x)
        acc += v * v;
    return acc / static_cast<double>(x.size());
}

double rms(std::span<const double> x) noexcept
{
    return std::sqrt(signal_power(x));
}

double peak_abs(std::span<const double> x) noexcept
{
    double p = 0.0;
    for (double v: x)
        p = std::max(p, std::abs(v));
    return p;
}

double rms_dbfs(std::span<const double> x) noexcept
{
    const double r = rms(x);
    if (r == 0.0)
        return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(r);
}

} // namespace tws
