// SPDX-License-Identifier: Apache-2.0
#include "tws/perturb/pitch_shift.hpp"

#include "tws/core/error.hpp"
#include "tws/core/pitch.hpp"
#include "tws/core/resample.hpp"
#include "tws/perturb/time_stretch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tws::perturb
{

namespace
{

constexpr double kUnvoicedSpacingS = 0.010;

Waveform fit_length(std::vector<double> y, std::size_t length, int rate)
{
    y.resize(length, 0.0);
    return Waveform(std::move(y), rate);
}

PitchShiftResult resample_path(const Waveform& x, double semitones, bool fallback)
{
    const double ratio = std::pow(2.0, -semitones / 12.0);
    const auto shifted_len = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(static_cast<double>(x.size()) * ratio)));
    auto shifted = resample_ratio(x.samples(), ratio, shifted_len);
    const Waveform restored = time_stretch(Waveform(std::move(shifted), x.sample_rate()), ratio, StretchQuality::High);
    return {fit_length(restored.data(), x.size(), x.sample_rate()), fallback};
}

// Index of the frame whose centre is closest to sample t.
std::size_t frame_at(const PitchContour& c, double t)
{
    const double idx = (t - 0.5 * static_cast<double>(c.frame_len)) / static_cast<double>(c.hop);
    return static_cast<std::size_t>(std::clamp<double>(std::round(idx), 0.0, static_cast<double>(c.f0_hz.size() - 1)));
}

std::size_t argmax_in(std::span<const double> x, double lo, double hi)
{
    const auto a = static_cast<std::size_t>(std::clamp<double>(std::floor(lo), 0.0, static_cast<double>(x.size() - 1)));
    const auto b = static_cast<std::size_t>(std::clamp<double>(std::ceil(hi), 0.0, static_cast<double>(x.size() - 1)));
    std::size_t best = a;
    for (std::size_t i = a; i <= b; ++i)
        if (x[i] > x[best])
            best = i;
    return best;
}

} // namespace

std::vector<PitchMark> find_pitch_marks(const Waveform& x)
{
    std::vector<PitchMark> marks;
    const PitchTrackerOptions options;
    if (x.size() < static_cast<std::size_t>(std::lround(options.frame_s * x.sample_rate())))
        return marks;
    const PitchContour contour = track_pitch(x, options);
    const auto samples = x.samples();
    const double fs = x.sample_rate();
    const double unvoiced_period = kUnvoicedSpacingS * fs;
    const double end = static_cast<double>(x.size());

    double t = 0.0;
    bool prev_voiced = false;
    while (t < end)
    {
        const double f0 = contour.f0_hz[frame_at(contour, t)];
        if (f0 > 0.0)
        {
            const double period = fs / f0;
            double pos;
            if (!prev_voiced)
                pos = static_cast<double>(argmax_in(samples, t, t + period - 1.0));
            else
                pos = static_cast<double>(argmax_in(samples, t - 0.25 * period, t + 0.25 * period));
            if (!marks.empty() && pos <= marks.back().position)
                pos = t;
            marks.push_back({pos, period, true});
            t = pos + period;
            prev_voiced = true;
        }
        else
        {
            marks.push_back({t, unvoiced_period, false});
            t += unvoiced_period;
            prev_voiced = false;
        }
    }
    return marks;
}

PitchShiftResult pitch_shift(const Waveform& x, double semitones, bool preserve_formants)
{
    if (!(std::abs(semitones) <= 12.0))
        throw InvalidArgumentError("pitch shift limited to ±12 semitones, got " + std::to_string(semitones));
    if (x.empty())
        throw SignalTooShortError("cannot pitch-shift an empty signal");
    if (semitones == 0.0)
        return {x, false};
    if (!preserve_formants)
        return resample_path(x, semitones, false);

    const auto marks = find_pitch_marks(x);
    double voiced_duration = 0.0;
    double period_sum = 0.0;
    std::size_t voiced_marks = 0;
    for (const auto& m: marks)
        if (m.voiced)
        {
            voiced_duration += m.period;
            period_sum += m.period;
            ++voiced_marks;
        }
    if (voiced_marks < 3 || voiced_duration < 3.0 * period_sum / static_cast<double>(voiced_marks))
        return resample_path(x, semitones, true);

    const double pitch_factor = std::pow(2.0, semitones / 12.0);
    const auto in = x.samples();
    const auto n = static_cast<long long>(in.size());
    std::vector<double> acc(in.size(), 0.0);
    std::vector<double> norm(in.size(), 0.0);

    std::size_t nearest = 0;
    double ts = marks.front().position;
    while (ts < static_cast<double>(n))
    {
        while (nearest + 1 < marks.size()
               && std::abs(marks[nearest + 1].position - ts) <= std::abs(marks[nearest].position - ts))
            ++nearest;
        const PitchMark& m = marks[nearest];
        const double period = m.period;
        const auto shift = std::llround(ts - m.position);
        const auto lo = static_cast<long long>(std::ceil(m.position - period));
        const auto hi = static_cast<long long>(std::floor(m.position + period));
        for (long long i = std::max(0LL, lo); i <= std::min(n - 1, hi); ++i)
        {
            const long long o = i + shift;
            if (o < 0 || o >= n)
                continue;
            const double w = 0.5 + 0.5 * std::cos(std::numbers::pi * (static_cast<double>(i) - m.position) / period);
            acc[static_cast<std::size_t>(o)] += in[static_cast<std::size_t>(i)] * w;
            norm[static_cast<std::size_t>(o)] += w;
        }
        ts += m.voiced ? period / pitch_factor : period;
    }

    std::vector<double> out(in.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = norm[i] > 1e-3 ? acc[i] / norm[i] : acc[i];
    return {Waveform(std::move(out), x.sample_rate()), false};
}

} // namespace tws::perturb
