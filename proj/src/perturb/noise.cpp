// SPDX-License-Identifier: Apache-2.0
#include "tws/perturb/noise.hpp"

#include "tws/core/error.hpp"
#include "tws/core/fft.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace tws::perturb
{

Waveform gen_colored_noise(std::size_t length, NoiseType type, Rng& rng, int sample_rate_hz)
{
    if (length < 256)
        throw InvalidArgumentError("colored noise needs at least 256 samples, got " + std::to_string(length));

    std::vector<double> white(length);
    for (auto& v: white)
        v = rng.normal();

    std::vector<double> out;
    if (type == NoiseType::White)
        out = std::move(white);
    else
    {
        RealFft fft(length);
        std::vector<std::complex<double>> spectrum(fft.bins());
        fft.forward(white, spectrum);
        spectrum[0] = 0.0;
        const double exponent = type == NoiseType::Pink ? -0.5 : -1.0;
        for (std::size_t k = 1; k < spectrum.size(); ++k)
            spectrum[k] *= std::pow(static_cast<double>(k), exponent);
        out.resize(length);
        fft.inverse(spectrum, out);
    }

    const double r = rms(out);
    if (r > 0.0)
        for (auto& v: out)
            v /= r;
    return Waveform(std::move(out), sample_rate_hz);
}

NoiseSegment draw_noise_segment(std::size_t clip_length, Rng& rng)
{
    const auto lo = static_cast<std::int64_t>(std::ceil(0.2 * static_cast<double>(clip_length)));
    const auto hi = static_cast<std::int64_t>(std::floor(0.8 * static_cast<double>(clip_length)));
    NoiseSegment seg;
    seg.length = static_cast<std::size_t>(std::max<std::int64_t>(1, rng.uniform_int(lo, std::max(lo, hi))));
    seg.start = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(clip_length - seg.length)));
    return seg;
}

Waveform mix_at_snr(const Waveform& x, const Waveform& noise, double snr_db, std::optional<NoiseSegment> gate)
{
    if (noise.size() != x.size())
        throw LengthMismatchError(x.size(), noise.size());
    if (noise.sample_rate() != x.sample_rate())
        throw SampleRateMismatchError(x.sample_rate(), noise.sample_rate());
    if (signal_power(x.samples()) == 0.0)
        throw ZeroPowerError("cannot set an SNR against a zero-power signal");

    std::size_t start = 0;
    std::size_t len = x.size();
    if (gate)
    {
        if (gate->length == 0 || gate->start + gate->length > x.size())
            throw InvalidArgumentError("noise gate outside the clip");
        start = gate->start;
        len = gate->length;
    }

    double x_rms = rms(x.samples().subspan(start, len));
    if (x_rms == 0.0)
        x_rms = rms(x.samples());
    const double n_rms = rms(noise.samples().subspan(start, len));
    if (n_rms == 0.0)
        throw ZeroPowerError("noise has no power inside the gate");
    const double alpha = x_rms / (n_rms * std::pow(10.0, snr_db / 20.0));

    std::vector<double> out(x.data());
    for (std::size_t i = start; i < start + len; ++i)
        out[i] += alpha * noise[i];
    return Waveform(std::move(out), x.sample_rate());
}

Waveform add_noise_at_snr(const Waveform& x, const AdditiveNoiseParams& params, Rng& rng)
{
    if (signal_power(x.samples()) == 0.0)
        throw ZeroPowerError("additive noise needs a nonzero-power input");
    const Waveform noise = gen_colored_noise(std::max<std::size_t>(x.size(), 256), params.noise_type, rng,
                                             x.sample_rate());
    const Waveform trimmed(std::vector<double>(noise.data().begin(), noise.data().begin() + static_cast<std::ptrdiff_t>(x.size())),
                           x.sample_rate());
    std::optional<NoiseSegment> gate;
    if (params.temporal_mask)
        gate = draw_noise_segment(x.size(), rng);
    return mix_at_snr(x, trimmed, params.snr_db, gate);
}

} // namespace tws::perturb
