// SPDX-License-Identifier: Apache-2.0
#include "../support/oracles.hpp"

#include "tws/core/convolve.hpp"
#include "tws/core/error.hpp"
#include "tws/core/metrics.hpp"
#include "tws/core/pitch.hpp"
#include "tws/core/resample.hpp"
#include "tws/core/rng.hpp"

#include <gtest/gtest.h>

#include <random>

namespace
{

using namespace tws;
using namespace tws::testing;

Waveform plus(const Waveform& a, std::span<const double> b, double scale = 1.0)
{
    std::vector<double> v(a.data());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] += scale * b[i];
    return {std::move(v), a.sample_rate()};
}

TEST(Snr, EqualPowerIsZeroDb)
{
    const auto x = sine(440.0, 1.0, 0.5);
    auto n = gaussian_vector(x.size(), 1);
    const double scale = rms(x.samples()) / rms(n);
    EXPECT_NEAR(measure_snr(x, plus(x, n, scale)), 0.0, 0.01);
}

TEST(Snr, TenthPowerIsTenDb)
{
    const auto x = sine(440.0, 1.0, std::sqrt(2.0)); // unit power
    auto n = gaussian_vector(x.size(), 2);
    const double scale = std::sqrt(0.1) / rms(n);
    EXPECT_NEAR(measure_snr(x, plus(x, n, scale)), 10.0, 0.1);
}

TEST(Snr, IdenticalIsInfiniteAndErrors)
{
    const auto x = sine(300.0, 0.1);
    EXPECT_TRUE(std::isinf(measure_snr(x, x)));
    EXPECT_GT(measure_snr(x, x), 0.0);
    EXPECT_THROW((void)measure_snr(x, Waveform::zeros(x.size() + 1)), LengthMismatchError);
    EXPECT_THROW((void)measure_snr(Waveform::zeros(10), Waveform::zeros(10)), ZeroPowerError);
    EXPECT_THROW((void)measure_snr(x, Waveform(x.data(), 8000)), SampleRateMismatchError);
}

TEST(Distance, Basics)
{
    auto v = gaussian_vector(1000, 3);
    const double n = l2(v);
    for (auto& s: v)
        s /= n;
    const Waveform x(v, 16000);
    std::vector<double> neg(v);
    for (auto& s: neg)
        s = -s;
    EXPECT_EQ(signal_distance(x, x).value, 0.0);
    EXPECT_NEAR(signal_distance(x, Waveform(neg, 16000)).value, 2.0, 1e-12);

    const auto d = gaussian_vector(1000, 4, 0.1);
    EXPECT_NEAR(signal_distance(x, plus(x, d)).value, l2(d), 1e-12);
    EXPECT_THROW((void)signal_distance(x, Waveform(v, 8000)), SampleRateMismatchError);
}

TEST(Distance, ZeroPadsShorterSignal)
{
    const Waveform a({1.0, 2.0, 3.0}, 16000);
    const Waveform b({1.0, 2.0}, 16000);
    EXPECT_DOUBLE_EQ(signal_distance(a, b).value, 3.0);
    EXPECT_DOUBLE_EQ(signal_distance(b, a).value, 3.0);
}

TEST(Distance, SymmetryAndTriangleOnRandomTriples)
{
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<std::size_t> len(10, 500);
    for (int i = 0; i < 200; ++i)
    {
        const Waveform a(gaussian_vector(len(gen), gen()), 16000);
        const Waveform b(gaussian_vector(len(gen), gen()), 16000);
        const Waveform c(gaussian_vector(len(gen), gen()), 16000);
        const double ab = signal_distance(a, b).value;
        ASSERT_DOUBLE_EQ(ab, signal_distance(b, a).value);
        ASSERT_LE(signal_distance(a, c).value, ab + signal_distance(b, c).value + 1e-12);
    }
}

TEST(Convolve, MatchesNaiveConvolution)
{
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<std::size_t> len(1, 700);
    for (int i = 0; i < 200; ++i)
    {
        const auto a = gaussian_vector(len(gen), gen());
        const auto b = gaussian_vector(len(gen), gen());
        const auto fast = fft_convolve(a, b);
        const auto slow = naive_convolve(a, b);
        ASSERT_EQ(fast.size(), slow.size());
        for (std::size_t k = 0; k < slow.size(); ++k)
            ASSERT_NEAR(fast[k], slow[k], 1e-6);
    }
}

TEST(Resample, PreservesSinusoidFrequency)
{
    const auto x = sine(1000.0, 0.5, 0.5, 44100);
    const auto y = resample(x, 16000);
    EXPECT_EQ(y.sample_rate(), 16000);
    EXPECT_NEAR(static_cast<double>(y.size()), 8000.0, 1.0);
    const auto mid = y.samples().subspan(1000, 4000);
    EXPECT_NEAR(peak_frequency_hz(mid, 16000, 900.0, 1100.0), 1000.0, 1.0);
    // amplitude survives the passband
    EXPECT_NEAR(rms(mid), 0.5 / std::sqrt(2.0), 0.01);
}

TEST(Resample, CanonicalRateIsIdentityAt16k)
{
    const auto x = sine(300.0, 0.1);
    EXPECT_EQ(to_canonical_rate(x), x);
}

TEST(PitchTracker, SyntheticVowel)
{
    const auto c = track_pitch(vowel(200.0, 1.0));
    EXPECT_NEAR(c.median_voiced_hz(), 200.0, 2.0);
    EXPECT_GT(c.voiced_fraction(), 0.9);
}

Waveform joined(const Waveform& a, const Waveform& b)
{
    auto v = a.data();
    const auto w = b.samples();
    v.insert(v.end(), w.begin(), w.end());
    return Waveform(std::move(v), a.sample_rate());
}

TEST(PitchTracker, FaintFramesAreGated)
{
    const auto c = track_pitch(joined(vowel(200.0, 0.5), vowel(80.0, 0.5, 5e-4)));
    EXPECT_NEAR(c.median_voiced_hz(), 200.0, 2.0);
    EXPECT_NEAR(c.voiced_fraction(), 0.5, 0.05);

    const auto d = track_pitch(joined(vowel(200.0, 0.5), vowel(100.0, 0.5, 0.05)));
    EXPECT_NEAR(d.voiced_fraction(), 1.0, 0.05);
}

TEST(PitchTracker, WhiteNoiseMostlyUnvoiced)
{
    const Waveform n(gaussian_vector(16000, 8, 0.3), 16000);
    EXPECT_LT(track_pitch(n).voiced_fraction(), 0.2);
}

TEST(PitchTracker, SilenceAllUnvoiced)
{
    const auto c = track_pitch(Waveform::zeros(8000));
    for (double f: c.f0_hz)
        ASSERT_EQ(f, 0.0);
    EXPECT_EQ(c.median_voiced_hz(), 0.0);
    EXPECT_THROW((void)track_pitch(Waveform::zeros(100)), SignalTooShortError);
}

TEST(Rng, SubstreamsAreStableAndDistinct)
{
    auto a = Rng::substream({1337, 42, 0});
    auto b = Rng::substream({1337, 42, 0});
    auto c = Rng::substream({1337, 42, 1});
    const auto va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    EXPECT_NE(va, c.next_u64());
    EXPECT_EQ(stable_hash32(""), 2166136261u);
    EXPECT_EQ(stable_hash32("a"), 0xe40c292cu);
}

} // namespace
