// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tws
{

inline constexpr int kCanonicalSampleRate = 16000;

/// Mono sampled audio. Every sample is finite and the rate is positive;
/// the constructor enforces both.
class Waveform
{
  public:
    Waveform() = default;
    Waveform(std::vector<double> samples, int sample_rate_hz);

    static Waveform zeros(std::size_t length, int sample_rate_hz = kCanonicalSampleRate);

    [[nodiscard]] std::span<const double> samples() const noexcept { return _samples; }
    [[nodiscard]] const std::vector<double>& data() const noexcept { return _samples; }
    [[nodiscard]] int sample_rate() const noexcept { return _sample_rate; }
    [[nodiscard]] std::size_t size() const noexcept { return _samples.size(); }
    [[nodiscard]] bool empty() const noexcept { return _samples.empty(); }
    [[nodiscard]] double duration_s() const noexcept;
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return _samples[i]; }

    /// Moves the sample buffer out, leaving this waveform empty.
    [[nodiscard]] std::vector<double> release() &&;

    friend bool operator==(const Waveform&, const Waveform&) = default;

  private:
    std::vector<double> _samples;
    int _sample_rate = kCanonicalSampleRate;
};

[[nodiscard]] double signal_power(std::span<const double> x) noexcept;
[[nodiscard]] double rms(std::span<const double> x) noexcept;
[[nodiscard]] double peak_abs(std::span<const double> x) noexcept;

/// 20·log10(rms); −∞ for an all-zero signal.
[[nodiscard]] double rms_dbfs(std::span<const double> x) noexcept;

} // namespace tws
