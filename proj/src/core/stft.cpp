// SPDX-License-Identifier: Apache-2.0
#include "tws/core/stft.hpp"

#include "tws/core/error.hpp"
#include "tws/core/fft.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tws
{

std::vector<double> make_window(WindowKind kind, std::size_t n)
{
    std::vector<double> w(n, 1.0);
    if (kind == WindowKind::Hann)
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    return w;
}

void validate_stft_params(const StftParams& p)
{
    if (!is_power_of_two(p.window_len))
        throw InvalidArgumentError("window length must be a power of two, got " + std::to_string(p.window_len));
    if (p.hop == 0 || p.hop > p.window_len || p.window_len % p.hop != 0)
        throw InvalidArgumentError("hop must divide the window length, got " + std::to_string(p.hop));
    if (p.window == WindowKind::Hann && p.hop * 2 > p.window_len)
        throw InvalidArgumentError("Hann window needs hop <= window/2 for overlap-add");
}

Spectrogram stft(const Waveform& w, const StftParams& params)
{
    validate_stft_params(params);
    if (w.size() < params.window_len)
        throw SignalTooShortError("signal of " + std::to_string(w.size()) + " samples is shorter than window "
                                  + std::to_string(params.window_len));

    Spectrogram s;
    s.window_len = params.window_len;
    s.hop = params.hop;
    s.window = params.window;
    s.pad_front = params.window_len - params.hop;
    s.signal_length = w.size();
    s.sample_rate = w.sample_rate();
    s.bin_count = params.window_len / 2 + 1;
    s.frame_count = (s.pad_front + w.size() - 1) / params.hop + 1;
    s.bins.assign(s.frame_count * s.bin_count, {});

    const auto window = make_window(params.window, params.window_len);
    RealFft fft(params.window_len);
    std::vector<double> frame(params.window_len);
    const auto x = w.samples();
    for (std::size_t f = 0; f < s.frame_count; ++f)
    {
        const std::size_t start = f * params.hop; // in padded coordinates
        for (std::size_t m = 0; m < params.window_len; ++m)
        {
            const std::size_t p = start + m;
            const bool inside = p >= s.pad_front && p - s.pad_front < x.size();
            frame[m] = inside ? x[p - s.pad_front] * window[m] : 0.0;
        }
        fft.forward(frame, s.frame(f));
    }
    return s;
}

Waveform istft(const Spectrogram& s)
{
    if (s.bin_count != s.window_len / 2 + 1 || s.bins.size() != s.frame_count * s.bin_count || s.frame_count == 0)
        throw InvalidArgumentError("inconsistent spectrogram dimensions");
    validate_stft_params({s.window_len, s.hop, s.window});

    const std::size_t total = (s.frame_count - 1) * s.hop + s.window_len;
    if (s.pad_front + s.signal_length > total)
        throw InvalidArgumentError("spectrogram too short for its declared signal length");

    const auto window = make_window(s.window, s.window_len);
    std::vector<double> acc(total, 0.0);
    std::vector<double> norm(total, 0.0);
    std::vector<double> frame(s.window_len);
    RealFft fft(s.window_len);
    for (std::size_t f = 0; f < s.frame_count; ++f)
    {
        fft.inverse(s.frame(f), frame);
        const std::size_t start = f * s.hop;
        for (std::size_t m = 0; m < s.window_len; ++m)
        {
            acc[start + m] += frame[m] * window[m];
            norm[start + m] += window[m] * window[m];
        }
    }

    std::vector<double> out(s.signal_length, 0.0);
    for (std::size_t i = 0; i < s.signal_length; ++i)
    {
        const std::size_t p = i + s.pad_front;
        out[i] = norm[p] > 1e-12 ? acc[p] / norm[p] : 0.0;
    }
    return Waveform(std::move(out), s.sample_rate);
}

double bin_frequency(const Spectrogram& s, std::size_t k) noexcept
{
    return static_cast<double>(k) * s.sample_rate / static_cast<double>(s.window_len);
}

} // namespace tws
