// SPDX-License-Identifier: Apache-2.0
#include "../support/oracles.hpp"

#include "tws/core/error.hpp"
#include "tws/core/stft.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace
{

using namespace tws;
using namespace tws::testing;

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

TEST(Stft, BinCenteredSinusoidMatchesDirectDft)
{
    const std::size_t n = 1024;
    const std::size_t k0 = 64; // 1000 Hz at 16 kHz
    const auto x = sine(static_cast<double>(k0) * 16000.0 / n, 0.5, 0.8);
    const auto s = stft(x, {n, 256, WindowKind::Hann});
    ASSERT_EQ(s.bin_count, n / 2 + 1);

    // a frame fully inside the signal: frame f covers x[f*hop - pad, ...)
    const std::size_t f = 10;
    const std::size_t start = f * s.hop - s.pad_front;
    const auto w = hann_periodic(n);
    for (std::size_t k: {std::size_t{0}, k0 - 1, k0, k0 + 1, std::size_t{200}})
    {
        const auto ref = direct_dft_bin(x.samples().subspan(start, n), w, k);
        EXPECT_NEAR(std::abs(s.at(f, k) - ref), 0.0, 1e-8 * std::max(1.0, std::abs(ref)));
    }

    for (std::size_t fr = 4; fr + 4 < s.frame_count; ++fr)
    {
        const double peak = std::abs(s.at(fr, k0));
        for (std::size_t k = 0; k < s.bin_count; ++k)
        {
            if (k + 1 >= k0 && k <= k0 + 1)
                continue; // Hann main lobe spans the neighbours
            ASSERT_LE(20.0 * std::log10(std::abs(s.at(fr, k)) / peak + 1e-300), -60.0) << "frame " << fr << " bin " << k;
        }
    }
}

TEST(Stft, ZeroSignalGivesZeroSpectrogram)
{
    const auto s = stft(Waveform::zeros(4000));
    for (const auto& c: s.bins)
        ASSERT_EQ(c, std::complex<double>(0.0, 0.0));
    const auto back = istft(s);
    EXPECT_EQ(back, Waveform::zeros(4000));
}

TEST(Stft, PerfectReconstructionRandomized)
{
    std::mt19937_64 gen(2024);
    const std::vector<StftParams> configs = {
        {1024, 256, WindowKind::Hann}, {1024, 512, WindowKind::Hann}, {512, 128, WindowKind::Hann},
        {256, 64, WindowKind::Hann},   {2048, 512, WindowKind::Hann}, {256, 256, WindowKind::Rectangular},
    };
    std::uniform_int_distribution<std::size_t> len_dist(256, 65536);
    int cases = 0;
    for (int i = 0; i < 60; ++i)
    {
        const auto& p = configs[static_cast<std::size_t>(i) % configs.size()];
        const std::size_t len = std::max(len_dist(gen), p.window_len);
        const Waveform x(uniform_vector(len, gen()), 16000);
        const auto y = istft(stft(x, p));
        ASSERT_EQ(y.size(), x.size());
        EXPECT_LT(max_abs_diff(x.samples(), y.samples()), 1e-6) << "len " << len << " win " << p.window_len;
        ++cases;
    }
    EXPECT_EQ(cases, 60);
}

TEST(Stft, WhiteNoiseReconstructs)
{
    const Waveform x(gaussian_vector(20000, 5, 0.3), 16000);
    EXPECT_LT(max_abs_diff(x.samples(), istft(stft(x)).samples()), 1e-6);
}

TEST(Stft, SingleFrameRectangular)
{
    const Waveform x(uniform_vector(512, 11), 16000);
    const auto s = stft(x, {512, 512, WindowKind::Rectangular});
    ASSERT_EQ(s.frame_count, 1u);
    EXPECT_LT(max_abs_diff(x.samples(), istft(s).samples()), 1e-12);
}

TEST(Stft, ZeroedBinRemovesExactlyItsSynthesis)
{
    const Waveform x(gaussian_vector(8192, 3, 0.2), 16000);
    const StftParams p{512, 128, WindowKind::Hann};
    auto s = stft(x, p);
    const std::size_t k = 37;
    auto zeroed = s;
    for (std::size_t f = 0; f < s.frame_count; ++f)
        zeroed.at(f, k) = 0.0;
    const auto full = istft(s);
    const auto without = istft(zeroed);

    // oracle: inverse DFT of bin k alone per frame, windowed overlap-add,
    // divided by the overlap sum of squared windows
    const auto w = hann_periodic(p.window_len);
    const std::size_t total = (s.frame_count - 1) * p.hop + p.window_len;
    std::vector<double> acc(total, 0.0), norm(total, 0.0);
    const double n = static_cast<double>(p.window_len);
    for (std::size_t f = 0; f < s.frame_count; ++f)
        for (std::size_t m = 0; m < p.window_len; ++m)
        {
            const double ang = kTwoPi * static_cast<double>(k * m) / n;
            const double v = 2.0 / n * (s.at(f, k) * std::complex<double>(std::cos(ang), std::sin(ang))).real();
            acc[f * p.hop + m] += v * w[m];
            norm[f * p.hop + m] += w[m] * w[m];
        }
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double expected = acc[i + s.pad_front] / norm[i + s.pad_front];
        worst = std::max(worst, std::abs((full[i] - without[i]) - expected));
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(Stft, ParsevalWithWindowNormalization)
{
    for (std::size_t hop: {std::size_t{64}, std::size_t{128}})
    {
        const Waveform x(gaussian_vector(10000, 17 + hop, 0.4), 16000);
        const StftParams p{512, hop, WindowKind::Hann};
        const auto s = stft(x, p);
        const auto w = hann_periodic(p.window_len);
        double overlap = 0.0; // sum over frames of w^2 at a fixed sample
        for (std::size_t m = 0; m < p.window_len; m += hop)
            overlap += w[m] * w[m];
        double spec = 0.0;
        for (std::size_t f = 0; f < s.frame_count; ++f)
            for (std::size_t k = 0; k < s.bin_count; ++k)
            {
                const double weight = (k == 0 || k == s.bin_count - 1) ? 1.0 : 2.0;
                spec += weight * std::norm(s.at(f, k));
            }
        spec /= static_cast<double>(p.window_len) * overlap;
        const double time = energy(x.samples());
        EXPECT_NEAR(spec / time, 1.0, 1e-6) << "hop " << hop;
    }
}

TEST(Stft, RejectsBadParametersAndShortSignals)
{
    EXPECT_THROW((void)stft(Waveform::zeros(100)), SignalTooShortError);
    EXPECT_THROW((void)stft(Waveform::zeros(4096), {1000, 250, WindowKind::Hann}), InvalidArgumentError);
    EXPECT_THROW((void)stft(Waveform::zeros(4096), {1024, 1024, WindowKind::Hann}), InvalidArgumentError);
    EXPECT_THROW((void)stft(Waveform::zeros(4096), {1024, 300, WindowKind::Hann}), InvalidArgumentError);
    auto s = stft(Waveform::zeros(4096));
    s.bins.pop_back();
    EXPECT_THROW((void)istft(s), InvalidArgumentError);
}

} // namespace
