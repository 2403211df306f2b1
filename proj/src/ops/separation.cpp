// SPDX-License-Identifier: Apache-2.0
#include "tws/ops/separation.hpp"

#include "tws/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tws::ops
{

namespace
{

double median_of(std::vector<double>& v)
{
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    if (v.size() % 2 == 1)
        return v[mid];
    const double upper = v[mid];
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

} // namespace

Waveform extract_voice(const Waveform& x, const HpssOptions& opt)
{
    const std::size_t needed = opt.stft.window_len + 7 * opt.stft.hop;
    if (x.size() < needed)
        throw SignalTooShortError("extract_voice needs at least " + std::to_string(needed) + " samples");
    if (opt.time_kernel == 0 || opt.freq_kernel == 0)
        throw InvalidArgumentError("median kernels must be non-empty");

    auto s = stft(x, opt.stft);
    const std::size_t frames = s.frame_count;
    const std::size_t bins = s.bin_count;
    std::vector<double> mag(s.bins.size());
    for (std::size_t i = 0; i < mag.size(); ++i)
        mag[i] = std::abs(s.bins[i]);

    const std::size_t th = opt.time_kernel / 2;
    const std::size_t fh = opt.freq_kernel / 2;
    std::vector<double> scratch;
    for (std::size_t f = 0; f < frames; ++f)
        for (std::size_t k = 0; k < bins; ++k)
        {
            const double m = mag[f * bins + k];
            if (m == 0.0)
                continue;
            // windows are truncated at the edges rather than padded
            scratch.clear();
            for (std::size_t g = f >= th ? f - th : 0; g <= std::min(frames - 1, f + th); ++g)
                scratch.push_back(mag[g * bins + k]);
            const double harm = median_of(scratch);
            scratch.clear();
            for (std::size_t j = k >= fh ? k - fh : 0; j <= std::min(bins - 1, k + fh); ++j)
                scratch.push_back(mag[f * bins + j]);
            const double perc = median_of(scratch);

            const double hp = std::pow(harm, opt.mask_power);
            const double pp = std::pow(perc, opt.mask_power);
            const double mask = hp + pp > 0.0 ? hp / (hp + pp) : 0.5;
            s.at(f, k) *= mask;
        }
    return istft(s);
}

} // namespace tws::ops
