// SPDX-License-Identifier: Apache-2.0
#include "tws/core/synth.hpp"

#include "tws/core/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace tws::synth
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t samples_of(double seconds, int rate)
{
    if (!(seconds > 0.0))
        throw InvalidArgumentError("duration must be positive");
    return static_cast<std::size_t>(std::llround(seconds * rate));
}

std::vector<double> gate_envelope(std::size_t n, const GateOptions& g, int rate)
{
    std::vector<double> env(n, 0.0);
    const double period = g.on_s + g.off_s;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double t = static_cast<double>(i) / rate - g.lead_s;
        if (t < 0.0)
            continue;
        const double local = std::fmod(t, period);
        if (local >= g.on_s)
            continue;
        double e = 1.0;
        if (local < g.ramp_s)
            e = 0.5 - 0.5 * std::cos(std::numbers::pi * local / g.ramp_s);
        else if (g.on_s - local < g.ramp_s)
            e = 0.5 - 0.5 * std::cos(std::numbers::pi * (g.on_s - local) / g.ramp_s);
        env[i] = e;
    }
    return env;
}

void scale_to_peak(std::vector<double>& v, double peak)
{
    double m = 0.0;
    for (double x: v)
        m = std::max(m, std::abs(x));
    if (m > 0.0)
        for (auto& x: v)
            x *= peak / m;
}

struct Vowel
{
    double f1, f2;
};

// rough adult formant pairs for /a/ /e/ /i/ /o/ /u/
constexpr std::array<Vowel, 5> kVowels{{{730, 1090}, {530, 1840}, {270, 2290}, {570, 840}, {300, 870}}};

double formant_gain(double f, const Vowel& v)
{
    auto peak = [](double f, double c, double bw) { return 1.0 / (1.0 + std::pow((f - c) / bw, 2)); };
    return 0.15 + peak(f, v.f1, 90.0) + 0.6 * peak(f, v.f2, 120.0);
}

} // namespace

Waveform tone_burst(double freq_hz, double duration_s, double amplitude, const GateOptions& gate, int rate)
{
    const auto n = samples_of(duration_s, rate);
    const auto env = gate_envelope(n, gate, rate);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = amplitude * env[i] * std::sin(kTwoPi * freq_hz * static_cast<double>(i) / rate);
    return Waveform(std::move(v), rate);
}

Waveform tone_stack(double f0_hz, double duration_s, int harmonics, double amplitude, const GateOptions& gate,
                    int rate)
{
    const auto n = samples_of(duration_s, rate);
    const auto env = gate_envelope(n, gate, rate);
    std::vector<double> v(n, 0.0);
    for (int k = 1; k <= harmonics && f0_hz * k < 0.45 * rate; ++k)
        for (std::size_t i = 0; i < n; ++i)
            v[i] += std::sin(kTwoPi * f0_hz * k * static_cast<double>(i) / rate + 0.7 * k) / k;
    for (std::size_t i = 0; i < n; ++i)
        v[i] *= env[i];
    scale_to_peak(v, amplitude);
    return Waveform(std::move(v), rate);
}

Waveform speech_like(const SpeechLikeOptions& o, Rng& rng, int rate)
{
    const auto n = samples_of(o.duration_s, rate);
    std::vector<double> v(n, 0.0);
    double t = o.lead_s;
    while (t < o.duration_s)
    {
        const double len = rng.uniform(o.syllable_min_s, o.syllable_max_s);
        const double gap = rng.uniform(o.gap_min_s, o.gap_max_s);
        const double f_start = o.f0_hz * rng.uniform(0.92, 1.08);
        const double f_end = f_start * rng.uniform(0.85, 1.15);
        const auto& vowel = kVowels[static_cast<std::size_t>(rng.uniform_int(0, kVowels.size() - 1))];
        const double level = rng.uniform(0.6, 1.0);

        const auto i0 = static_cast<std::size_t>(std::llround(t * rate));
        const auto i1 = std::min(n, static_cast<std::size_t>(std::llround((t + len) * rate)));
        const double attack = 0.02, release = 0.04;
        double phase = 0.0;
        for (std::size_t i = i0; i < i1; ++i)
        {
            const double u = static_cast<double>(i - i0) / rate;
            const double f0 = f_start + (f_end - f_start) * u / len;
            phase += kTwoPi * f0 / rate;
            double env = 1.0;
            if (u < attack)
                env = 0.5 - 0.5 * std::cos(std::numbers::pi * u / attack);
            else if (len - u < release)
                env = 0.5 - 0.5 * std::cos(std::numbers::pi * std::max(0.0, len - u) / release);
            double s = 0.0;
            for (int k = 1; f0 * k < 4000.0; ++k)
                s += formant_gain(f0 * k, vowel) / std::sqrt(static_cast<double>(k)) * std::sin(k * phase);
            v[i] += level * env * s;
        }
        t += len + gap;
    }
    scale_to_peak(v, o.peak);
    return Waveform(std::move(v), rate);
}

Waveform click_train(double period_s, double duration_s, double amplitude, double offset_s, int rate)
{
    const auto n = samples_of(duration_s, rate);
    if (!(period_s > 0.0))
        throw InvalidArgumentError("click period must be positive");
    std::vector<double> v(n, 0.0);
    for (double t = offset_s; t < duration_s; t += period_s)
    {
        const auto i = static_cast<std::size_t>(std::llround(t * rate));
        if (i < n)
            v[i] = amplitude;
    }
    return Waveform(std::move(v), rate);
}

} // namespace tws::synth
