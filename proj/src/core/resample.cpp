// SPDX-License-Identifier: Apache-2.0
#include "tws/core/resample.hpp"

#include "tws/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace tws
{

namespace
{

constexpr double kKaiserBeta = 8.0;
constexpr int kZeroCrossings = 32;

constexpr std::size_t kKaiserTableSize = 1 << 14;

// Kaiser window sampled over r in [0, 1], linearly interpolated on lookup.
const std::vector<double>& kaiser_table()
{
    static const std::vector<double> table = [] {
        std::vector<double> t(kKaiserTableSize + 2, 0.0);
        const double norm = std::cyl_bessel_i(0.0, kKaiserBeta);
        for (std::size_t i = 0; i <= kKaiserTableSize; ++i)
        {
            const double r = static_cast<double>(i) / kKaiserTableSize;
            t[i] = std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
        }
        return t;
    }();
    return table;
}

double kaiser(double t, double half_width)
{
    const double r = std::abs(t) / half_width;
    if (r >= 1.0)
        return 0.0;
    const auto& table = kaiser_table();
    const double pos = r * kKaiserTableSize;
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return table[i] + frac * (table[i + 1] - table[i]);
}

double sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

} // namespace

std::vector<double> resample_ratio(std::span<const double> x, double ratio, std::size_t out_len)
{
    if (!(ratio > 0.0) || !std::isfinite(ratio))
        throw InvalidArgumentError("resampling ratio must be positive");
    std::vector<double> out(out_len, 0.0);
    if (x.empty())
        return out;

    const double cutoff = std::min(1.0, ratio); // relative to the input Nyquist
    const double half_width = kZeroCrossings / cutoff;
    const auto n_in = static_cast<std::ptrdiff_t>(x.size());
    for (std::size_t n = 0; n < out_len; ++n)
    {
        const double t = static_cast<double>(n) / ratio;
        const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil(t - half_width)));
        const auto hi = std::min<std::ptrdiff_t>(n_in - 1, static_cast<std::ptrdiff_t>(std::floor(t + half_width)));
        double acc = 0.0;
        for (std::ptrdiff_t i = lo; i <= hi; ++i)
        {
            const double d = t - static_cast<double>(i);
            acc += x[static_cast<std::size_t>(i)] * cutoff * sinc(cutoff * d) * kaiser(d, half_width);
        }
        out[n] = acc;
    }
    return out;
}

Waveform resample(const Waveform& w, int target_rate_hz)
{
    if (target_rate_hz <= 0)
        throw InvalidArgumentError("target sample rate must be positive");
    if (w.sample_rate() == target_rate_hz)
        return w;
    const double ratio = static_cast<double>(target_rate_hz) / w.sample_rate();
    const auto out_len = static_cast<std::size_t>(std::llround(static_cast<double>(w.size()) * ratio));
    return Waveform(resample_ratio(w.samples(), ratio, out_len), target_rate_hz);
}

Waveform to_canonical_rate(const Waveform& w)
{
    return resample(w, kCanonicalSampleRate);
}

} // namespace tws
