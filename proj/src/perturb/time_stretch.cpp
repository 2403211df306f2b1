// SPDX-License-Identifier: Apache-2.0
#include "tws/perturb/time_stretch.hpp"

#include "tws/core/error.hpp"
#include "tws/core/fft.hpp"
#include "tws/core/stft.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace tws::perturb
{

namespace
{

double wrap_phase(double p)
{
    return p - 2.0 * std::numbers::pi * std::round(p / (2.0 * std::numbers::pi));
}

} // namespace

VocoderConfig vocoder_config(StretchQuality quality) noexcept
{
    if (quality == StretchQuality::High)
        return {2048, 512, true};
    return {1024, 512, false};
}

Waveform time_stretch(const Waveform& x, double factor, StretchQuality quality)
{
    if (!(factor >= kMinStretchFactor && factor <= kMaxStretchFactor))
        throw InvalidArgumentError("stretch factor out of range [0.25, 4]: " + std::to_string(factor));
    if (x.empty())
        throw SignalTooShortError("cannot stretch an empty signal");

    const VocoderConfig cfg = vocoder_config(quality);
    const std::size_t n = cfg.window;
    const std::size_t half = n / 2;
    const double hs = static_cast<double>(cfg.synthesis_hop);
    const double ha = hs * factor;
    const auto out_len = static_cast<std::size_t>(std::max<long long>(1, std::llround(static_cast<double>(x.size()) / factor)));
    const std::size_t frames = (out_len + half) / cfg.synthesis_hop + 1;

    const auto window = make_window(WindowKind::Hann, n);
    RealFft fft(n);
    const std::size_t bins = fft.bins();
    std::vector<double> frame(n);
    std::vector<std::complex<double>> spec(bins);
    std::vector<double> magnitude(bins);
    std::vector<double> phase(bins);
    std::vector<double> prev_phase(bins, 0.0);
    std::vector<double> synth_phase(bins, 0.0);
    std::vector<std::size_t> peaks;
    std::vector<double> acc(out_len + n, 0.0);
    std::vector<double> norm(out_len + n, 0.0);

    const auto in = x.samples();
    const auto n_in = static_cast<long long>(in.size());
    long long prev_center = 0;
    for (std::size_t j = 0; j < frames; ++j)
    {
        const long long center = std::llround(static_cast<double>(j) * ha);
        const long long start = center - static_cast<long long>(half);
        for (std::size_t m = 0; m < n; ++m)
        {
            const long long p = start + static_cast<long long>(m);
            frame[m] = (p >= 0 && p < n_in) ? in[static_cast<std::size_t>(p)] * window[m] : 0.0;
        }
        fft.forward(frame, spec);
        for (std::size_t k = 0; k < bins; ++k)
        {
            magnitude[k] = std::abs(spec[k]);
            phase[k] = std::arg(spec[k]);
        }

        if (j == 0)
            synth_phase = phase;
        else
        {
            const auto advance = static_cast<double>(center - prev_center);
            auto propagate = [&](std::size_t k) {
                const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
                const double deviation = wrap_phase(phase[k] - prev_phase[k] - omega * advance);
                const double inst = advance > 0.0 ? omega + deviation / advance : omega;
                synth_phase[k] += inst * hs;
            };

            if (!cfg.phase_locking)
                for (std::size_t k = 0; k < bins; ++k)
                    propagate(k);
            else
            {
                peaks.clear();
                for (std::size_t k = 0; k < bins; ++k)
                {
                    const double left = k > 0 ? magnitude[k - 1] : -1.0;
                    const double right = k + 1 < bins ? magnitude[k + 1] : -1.0;
                    if (magnitude[k] > left && magnitude[k] >= right)
                        peaks.push_back(k);
                }
                if (peaks.empty())
                    for (std::size_t k = 0; k < bins; ++k)
                        propagate(k);
                else
                {
                    for (std::size_t p: peaks)
                        propagate(p);
                    // Each bin follows the peak of its region of influence (boundary
                    // at the midpoint between neighbouring peaks).
                    std::size_t idx = 0;
                    for (std::size_t k = 0; k < bins; ++k)
                    {
                        while (idx + 1 < peaks.size() && k > (peaks[idx] + peaks[idx + 1]) / 2)
                            ++idx;
                        const std::size_t p = peaks[idx];
                        if (k != p)
                            synth_phase[k] = synth_phase[p] + (phase[k] - phase[p]);
                    }
                }
            }
        }
        prev_phase = phase;
        prev_center = center;

        for (std::size_t k = 0; k < bins; ++k)
            spec[k] = std::polar(magnitude[k], synth_phase[k]);
        fft.inverse(spec, frame);

        const long long out_start = static_cast<long long>(j * cfg.synthesis_hop) - static_cast<long long>(half);
        for (std::size_t m = 0; m < n; ++m)
        {
            const long long p = out_start + static_cast<long long>(m);
            if (p < 0 || p >= static_cast<long long>(out_len))
                continue;
            acc[static_cast<std::size_t>(p)] += frame[m] * window[m];
            norm[static_cast<std::size_t>(p)] += window[m] * window[m];
        }
    }

    std::vector<double> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i)
        out[i] = norm[i] > 1e-9 ? acc[i] / norm[i] : 0.0;
    return Waveform(std::move(out), x.sample_rate());
}

} // namespace tws::perturb
