// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tws
{

enum class WindowKind
{
    Hann,
    Rectangular,
};

/// Periodic window of length n.
[[nodiscard]] std::vector<double> make_window(WindowKind kind, std::size_t n);

struct StftParams
{
    std::size_t window_len = 1024;
    std::size_t hop = 256;
    WindowKind window = WindowKind::Hann;
};

/// Complex short-time spectrum, frames stored row-major.
///
/// The analysed signal is the input preceded by `pad_front` zeros and followed
/// by enough zeros to complete the last frame, so that every input sample is
/// covered by window_len/hop frames.
struct Spectrogram
{
    std::size_t frame_count = 0;
    std::size_t bin_count = 0;
    std::size_t window_len = 0;
    std::size_t hop = 0;
    WindowKind window = WindowKind::Hann;
    std::size_t pad_front = 0;
    std::size_t signal_length = 0;
    int sample_rate = kCanonicalSampleRate;
    std::vector<std::complex<double>> bins;

    [[nodiscard]] std::span<std::complex<double>> frame(std::size_t f)
    {
        return std::span(bins).subspan(f * bin_count, bin_count);
    }
    [[nodiscard]] std::span<const std::complex<double>> frame(std::size_t f) const
    {
        return std::span(bins).subspan(f * bin_count, bin_count);
    }
    [[nodiscard]] std::complex<double>& at(std::size_t f, std::size_t k) { return bins[f * bin_count + k]; }
    [[nodiscard]] const std::complex<double>& at(std::size_t f, std::size_t k) const
    {
        return bins[f * bin_count + k];
    }
};

/// Validates the window/hop pair: power-of-two window, hop dividing it, and
/// hop ≤ window/2 for Hann (the overlap-add condition).
void validate_stft_params(const StftParams& params);

/// Throws SignalTooShortError when the signal is shorter than one window.
[[nodiscard]] Spectrogram stft(const Waveform& w, const StftParams& params = {});

/// Weighted overlap-add resynthesis normalised by the squared-window overlap sum.
[[nodiscard]] Waveform istft(const Spectrogram& s);

/// Frequency in Hz of bin k.
[[nodiscard]] double bin_frequency(const Spectrogram& s, std::size_t k) noexcept;

} // namespace tws
