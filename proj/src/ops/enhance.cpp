// SPDX-License-Identifier: Apache-2.0
#include "tws/ops/enhance.hpp"

#include "tws/core/error.hpp"
#include "tws/perturb/time_stretch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tws::ops
{

namespace
{

double percentile_of(std::vector<double>& values, double pct)
{
    if (values.empty())
        return 0.0;
    const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
    const double a = values[lo];
    if (hi == lo)
        return a;
    const double b = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
    return a + (pos - static_cast<double>(lo)) * (b - a);
}

void require_frames(const Waveform& x, const StftParams& p, std::size_t frames, const char* what)
{
    const std::size_t needed = p.window_len + (frames - 1) * p.hop;
    if (x.size() < needed)
        throw SignalTooShortError(std::string(what) + " needs at least " + std::to_string(needed) + " samples, got "
                                  + std::to_string(x.size()));
}

} // namespace

Waveform denoise(const Waveform& x, double over_subtraction)
{
    DenoiseOptions opt;
    opt.over_subtraction = over_subtraction;
    return denoise(x, opt);
}

Waveform denoise(const Waveform& x, const DenoiseOptions& opt)
{
    if (!(opt.over_subtraction >= kMinOverSubtraction && opt.over_subtraction <= kMaxOverSubtraction))
        throw InvalidArgumentError("over_subtraction must be in [0.5, 4], got " + std::to_string(opt.over_subtraction));
    require_frames(x, opt.stft, 1, "denoise");
    auto s = stft(x, opt.stft);

    std::vector<double> mag(s.bins.size());
    for (std::size_t i = 0; i < mag.size(); ++i)
        mag[i] = std::abs(s.bins[i]);

    const std::size_t frames = s.frame_count;
    const std::size_t bins = s.bin_count;
    std::vector<double> scratch;
    std::vector<double> profile(frames * bins, 0.0);
    for (std::size_t k = 0; k < bins; ++k)
    {
        if (opt.context_frames == 0)
        {
            scratch.clear();
            for (std::size_t f = 0; f < frames; ++f)
                scratch.push_back(mag[f * bins + k]);
            const double p = percentile_of(scratch, opt.percentile);
            for (std::size_t f = 0; f < frames; ++f)
                profile[f * bins + k] = p;
            continue;
        }
        for (std::size_t f = 0; f < frames; ++f)
        {
            const std::size_t lo = f >= opt.context_frames ? f - opt.context_frames : 0;
            const std::size_t hi = std::min(frames - 1, f + opt.context_frames);
            scratch.clear();
            for (std::size_t g = lo; g <= hi; ++g)
                scratch.push_back(mag[g * bins + k]);
            profile[f * bins + k] = percentile_of(scratch, opt.percentile);
        }
    }

    for (std::size_t i = 0; i < s.bins.size(); ++i)
    {
        const double m = mag[i];
        if (m == 0.0)
            continue;
        const double target = std::max(m - opt.over_subtraction * profile[i], opt.spectral_floor * m);
        s.bins[i] *= target / m;
    }
    return istft(s);
}

Waveform dereverb(const Waveform& x, const DereverbOptions& opt)
{
    require_frames(x, opt.stft, 4, "dereverb");
    auto s = stft(x, opt.stft);
    const std::size_t frames = s.frame_count;
    const std::size_t bins = s.bin_count;

    // late[f] tracks an exponentially weighted average of |X|^2 up to frame f - lag
    std::vector<double> late(bins, 0.0);
    std::vector<double> power(s.bins.size());
    for (std::size_t i = 0; i < power.size(); ++i)
        power[i] = std::norm(s.bins[i]);

    for (std::size_t f = 0; f < frames; ++f)
    {
        if (f >= opt.lag_frames)
            for (std::size_t k = 0; k < bins; ++k)
                late[k] = opt.decay * late[k] + (1.0 - opt.decay) * power[(f - opt.lag_frames) * bins + k];
        for (std::size_t k = 0; k < bins; ++k)
        {
            const double p = power[f * bins + k];
            if (p == 0.0 || f == 0 || p >= power[(f - 1) * bins + k] || p >= opt.decay_gate * late[k])
                continue;
            const double floor_p = opt.floor * opt.floor * p;
            const double target = std::max(p - opt.strength * late[k], floor_p);
            s.at(f, k) *= std::sqrt(target / p);
        }
    }
    return istft(s);
}

Waveform normalize_loudness(const Waveform& x, double target_dbfs)
{
    if (!std::isfinite(target_dbfs))
        throw InvalidArgumentError("target level must be finite");
    const double r = rms(x.samples());
    if (r == 0.0)
        throw ZeroPowerError("cannot normalize a zero-power signal");
    const double gain = std::pow(10.0, target_dbfs / 20.0) / r;
    // already at the target: keep the samples bit-exact
    if (std::abs(gain - 1.0) < 1e-9)
        return x;
    std::vector<double> out(x.data());
    for (auto& v: out)
        v = std::clamp(v * gain, -1.0, 1.0);
    return Waveform(std::move(out), x.sample_rate());
}

perturb::PitchShiftResult correct_pitch(const Waveform& x, double semitones)
{
    return perturb::pitch_shift(x, semitones, true);
}

Waveform restore_tempo(const Waveform& x, double factor)
{
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw InvalidArgumentError("tempo factor must be positive");
    return perturb::time_stretch(x, 1.0 / factor, perturb::StretchQuality::High);
}

} // namespace tws::ops
