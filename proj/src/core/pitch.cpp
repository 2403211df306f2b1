// SPDX-License-Identifier: Apache-2.0
#include "tws/core/pitch.hpp"

#include "tws/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tws
{

namespace
{

// Lag estimate in samples for one frame, or 0 when unvoiced.
double frame_lag(std::span<const double> frame, std::size_t min_lag, std::size_t max_lag, double threshold)
{
    const std::size_t n = frame.size();
    double mean = 0.0;
    for (double v: frame)
        mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> x(n);
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        x[i] = frame[i] - mean;
        energy += x[i] * x[i];
    }
    if (energy <= 1e-20)
        return 0.0;

    max_lag = std::min(max_lag, n - 2);
    if (min_lag < 1 || min_lag + 1 >= max_lag)
        return 0.0;

    // r[lag] for lag in [min_lag - 1, max_lag + 1] so every candidate has neighbours.
    std::vector<double> r(max_lag + 2, 0.0);
    for (std::size_t lag = min_lag - 1; lag <= max_lag + 1 && lag < n; ++lag)
    {
        double cross = 0.0;
        double e0 = 0.0;
        double e1 = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i)
        {
            cross += x[i] * x[i + lag];
            e0 += x[i] * x[i];
            e1 += x[i + lag] * x[i + lag];
        }
        const double denom = std::sqrt(e0 * e1);
        r[lag] = denom > 0.0 ? cross / denom : 0.0;
    }

    double best = -1.0;
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag)
        if (r[lag] > r[lag - 1] && r[lag] >= r[lag + 1])
            best = std::max(best, r[lag]);
    if (best <= threshold)
        return 0.0;

    // Shortest lag whose local peak is close to the best one avoids octave-down errors.
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag)
    {
        if (!(r[lag] > r[lag - 1] && r[lag] >= r[lag + 1]) || r[lag] < 0.8 * best)
            continue;
        const double a = r[lag - 1];
        const double b = r[lag];
        const double c = r[lag + 1];
        const double denom = a - 2.0 * b + c;
        const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
        return static_cast<double>(lag) + std::clamp(shift, -0.5, 0.5);
    }
    return 0.0;
}

} // namespace

double PitchContour::median_voiced_hz() const
{
    std::vector<double> voiced;
    for (double f: f0_hz)
        if (f > 0.0)
            voiced.push_back(f);
    if (voiced.empty())
        return 0.0;
    std::sort(voiced.begin(), voiced.end());
    const std::size_t m = voiced.size() / 2;
    return voiced.size() % 2 == 1 ? voiced[m] : 0.5 * (voiced[m - 1] + voiced[m]);
}

double PitchContour::voiced_fraction() const
{
    if (f0_hz.empty())
        return 0.0;
    const auto voiced = std::count_if(f0_hz.begin(), f0_hz.end(), [](double f) { return f > 0.0; });
    return static_cast<double>(voiced) / static_cast<double>(f0_hz.size());
}

double PitchContour::frame_center(std::size_t i) const noexcept
{
    return static_cast<double>(i * hop) + 0.5 * static_cast<double>(frame_len);
}

PitchContour track_pitch(const Waveform& w, const PitchTrackerOptions& options)
{
    const double fs = w.sample_rate();
    PitchContour contour;
    contour.sample_rate = w.sample_rate();
    contour.frame_len = static_cast<std::size_t>(std::lround(options.frame_s * fs));
    contour.hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(options.hop_s * fs)));
    if (w.size() < contour.frame_len || contour.frame_len < 4)
        throw SignalTooShortError("pitch tracking needs at least " + std::to_string(contour.frame_len)
                                  + " samples, got " + std::to_string(w.size()));

    const auto min_lag = static_cast<std::size_t>(std::floor(fs / options.max_hz));
    const auto max_lag = static_cast<std::size_t>(std::ceil(fs / options.min_hz));
    const std::size_t frames = 1 + (w.size() - contour.frame_len) / contour.hop;
    contour.f0_hz.resize(frames, 0.0);
    const auto x = w.samples();
    std::vector<double> energy(frames, 0.0);
    for (std::size_t f = 0; f < frames; ++f)
    {
        const auto frame = x.subspan(f * contour.hop, contour.frame_len);
        double mean = 0.0;
        for (double v: frame)
            mean += v;
        mean /= static_cast<double>(frame.size());
        for (double v: frame)
            energy[f] += (v - mean) * (v - mean);
    }
    const double floor = *std::max_element(energy.begin(), energy.end()) * std::pow(10.0, -options.silence_gate_db / 10.0);
    for (std::size_t f = 0; f < frames; ++f)
    {
        if (energy[f] < floor)
            continue;
        const double lag = frame_lag(x.subspan(f * contour.hop, contour.frame_len), std::max<std::size_t>(min_lag, 2),
                                     max_lag, options.voicing_threshold);
        const double hz = lag > 0.0 ? fs / lag : 0.0;
        contour.f0_hz[f] = (hz >= options.min_hz * 0.95 && hz <= options.max_hz * 1.05) ? hz : 0.0;
    }
    return contour;
}

} // namespace tws
