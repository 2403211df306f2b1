// SPDX-License-Identifier: Apache-2.0
#include "tws/perturb/reverb.hpp"

#include "tws/core/convolve.hpp"
#include "tws/core/error.hpp"
#include "tws/perturb/spec.hpp"

#include <cmath>
#include <string>

namespace tws::perturb
{

std::size_t room_predelay_samples(double room_size_m3, int sample_rate_hz)
{
    return static_cast<std::size_t>(std::lround(std::cbrt(room_size_m3) / kSpeedOfSoundMs * sample_rate_hz));
}

double room_drr_db(double room_size_m3) noexcept
{
    using R = ParameterRanges;
    const double t = (room_size_m3 - R::kRoomMinM3) / (R::kRoomMaxM3 - R::kRoomMinM3);
    return 6.0 - 8.0 * t;
}

std::size_t room_ir_length(double rt60_ms, double room_size_m3, int sample_rate_hz)
{
    return room_predelay_samples(room_size_m3, sample_rate_hz)
           + static_cast<std::size_t>(std::lround(1.5 * rt60_ms * 1e-3 * sample_rate_hz));
}

Waveform synth_room_ir(double rt60_ms, double room_size_m3, Rng& rng, int sample_rate_hz)
{
    using R = ParameterRanges;
    if (!(rt60_ms >= R::kRt60MinMs && rt60_ms <= R::kRt60MaxMs))
        throw InvalidArgumentError("rt60_ms out of range: " + std::to_string(rt60_ms));
    if (!(room_size_m3 >= R::kRoomMinM3 && room_size_m3 <= R::kRoomMaxM3))
        throw InvalidArgumentError("room_size_m3 out of range: " + std::to_string(room_size_m3));

    const std::size_t predelay = room_predelay_samples(room_size_m3, sample_rate_hz);
    const std::size_t length = room_ir_length(rt60_ms, room_size_m3, sample_rate_hz);
    std::vector<double> h(length, 0.0);
    h[predelay] = 1.0;

    const double rt60_s = rt60_ms * 1e-3;
    double tail_energy = 0.0;
    for (std::size_t i = predelay + 1; i < length; ++i)
    {
        const double t = static_cast<double>(i - predelay) / sample_rate_hz;
        h[i] = rng.normal() * std::pow(10.0, -3.0 * t / rt60_s);
        tail_energy += h[i] * h[i];
    }
    if (tail_energy > 0.0)
    {
        const double target = std::pow(10.0, -room_drr_db(room_size_m3) / 10.0);
        const double scale = std::sqrt(target / tail_energy);
        for (std::size_t i = predelay + 1; i < length; ++i)
            h[i] *= scale;
    }
    return Waveform(std::move(h), sample_rate_hz);
}

Waveform apply_reverb(const Waveform& x, const Waveform& ir)
{
    if (x.sample_rate() != ir.sample_rate())
        throw SampleRateMismatchError(x.sample_rate(), ir.sample_rate());
    auto y = fft_convolve(x.samples(), ir.samples());
    const double in_peak = peak_abs(x.samples());
    const double out_peak = peak_abs(y);
    if (out_peak > 0.0)
    {
        const double g = in_peak / out_peak;
        for (auto& v: y)
            v *= g;
    }
    return Waveform(std::move(y), x.sample_rate());
}

} // namespace tws::perturb
