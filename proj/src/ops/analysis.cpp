// SPDX-License-Identifier: Apache-2.0
#include "tws/ops/analysis.hpp"

#include "tws/core/error.hpp"
#include "tws/core/stft.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace tws::ops
{

namespace
{

constexpr StftParams kAnalysisStft{1024, 256, WindowKind::Hann};

std::string fixed(double v, int decimals)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    // avoid "-0.00"
    const double scale = std::pow(10.0, decimals);
    if (std::round(v * scale) == 0.0)
        v = 0.0;
    return fmt::format("{:.{}f}", v, decimals);
}

} // namespace

double estimate_snr_db(const Waveform& x)
{
    const std::size_t n = kAnalysisStft.window_len;
    const std::size_t hop = kAnalysisStft.hop;
    if (x.size() < n)
        throw SignalTooShortError("analysis needs at least one window of samples");
    std::vector<double> powers;
    for (std::size_t start = 0; start + n <= x.size(); start += hop)
        powers.push_back(signal_power(x.samples().subspan(start, n)));
    double mean = 0.0;
    for (double p: powers)
        mean += p;
    mean /= static_cast<double>(powers.size());
    if (mean == 0.0)
        return 0.0;
    const auto idx = static_cast<std::size_t>(std::floor(0.1 * static_cast<double>(powers.size() - 1)));
    std::nth_element(powers.begin(), powers.begin() + static_cast<std::ptrdiff_t>(idx), powers.end());
    const double floor_p = powers[idx];
    if (floor_p <= 0.0)
        return kMaxReportedSnrDb;
    return std::min(kMaxReportedSnrDb, 10.0 * std::log10(mean / floor_p));
}

FeatureReport analyze_spectrum(const Waveform& x)
{
    FeatureReport r;
    r.estimated_snr_db = estimate_snr_db(x);
    r.duration_s = x.duration_s();
    r.rms_dbfs = rms_dbfs(x.samples());

    const auto s = stft(x, kAnalysisStft);
    std::vector<double> avg(s.bin_count, 0.0);
    for (std::size_t f = 0; f < s.frame_count; ++f)
        for (std::size_t k = 0; k < s.bin_count; ++k)
            avg[k] += std::norm(s.at(f, k));
    double total = 0.0;
    for (auto& v: avg)
    {
        v /= static_cast<double>(s.frame_count);
        total += v;
    }
    if (total > 0.0)
    {
        double weighted = 0.0;
        for (std::size_t k = 0; k < s.bin_count; ++k)
            weighted += bin_frequency(s, k) * avg[k];
        r.spectral_centroid_hz = weighted / total;

        double cum = 0.0;
        for (std::size_t k = 0; k < s.bin_count; ++k)
        {
            cum += avg[k];
            if (cum >= 0.85 * total)
            {
                r.spectral_rolloff_hz = bin_frequency(s, k);
                break;
            }
        }

        // geometric over arithmetic mean, DC excluded; a tiny floor keeps
        // empty bins from sending the log to -inf
        const double eps = 1e-20 * total;
        double log_sum = 0.0;
        double lin_sum = 0.0;
        for (std::size_t k = 1; k < s.bin_count; ++k)
        {
            log_sum += std::log(avg[k] + eps);
            lin_sum += avg[k] + eps;
        }
        const double m = static_cast<double>(s.bin_count - 1);
        r.spectral_flatness = std::clamp(std::exp(log_sum / m) / (lin_sum / m), 0.0, 1.0);
    }

    if (x.size() >= static_cast<std::size_t>(std::lround(PitchTrackerOptions{}.frame_s * x.sample_rate())))
    {
        const auto contour = track_pitch(x);
        r.f0_median_hz = contour.median_voiced_hz();
        r.voiced_fraction = contour.voiced_fraction();
    }
    return r;
}

std::string render(const FeatureReport& r)
{
    return fmt::format("estimated_snr_db={} spectral_centroid_hz={} spectral_rolloff_hz={} spectral_flatness={} "
                       "rms_dbfs={} f0_median_hz={} voiced_fraction={} duration_s={}",
                       fixed(r.estimated_snr_db, 2), fixed(r.spectral_centroid_hz, 1),
                       fixed(r.spectral_rolloff_hz, 1), fixed(r.spectral_flatness, 4), fixed(r.rms_dbfs, 2),
                       fixed(r.f0_median_hz, 2), fixed(r.voiced_fraction, 3), fixed(r.duration_s, 3));
}

std::string render(const PitchContour& c)
{
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (double f: c.f0_hz)
        if (f > 0.0)
        {
            lo = any ? std::min(lo, f) : f;
            hi = any ? std::max(hi, f) : f;
            any = true;
        }
    return fmt::format("f0_median_hz={} voiced_fraction={} f0_min_hz={} f0_max_hz={} frames={}",
                       fixed(c.median_voiced_hz(), 2), fixed(c.voiced_fraction(), 3), fixed(lo, 2), fixed(hi, 2),
                       c.f0_hz.size());
}

std::string render_audio_update(const Waveform& w)
{
    return fmt::format("AUDIO_UPDATED duration_s={} rms_dbfs={}", fixed(w.duration_s(), 3),
                       fixed(rms_dbfs(w.samples()), 2));
}

} // namespace tws::ops
