// SPDX-License-Identifier: Apache-2.0
#include "tws/core/error.hpp"
#include "tws/core/wav_io.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

namespace
{

namespace fs = std::filesystem;
using namespace tws;

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / "tws_wav_io_test";
    fs::create_directories(dir);
    return dir / name;
}

void put_u16(std::string& s, std::uint16_t v)
{
    s.push_back(static_cast<char>(v & 0xff));
    s.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& s, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Hand-built RIFF so the reader is not only tested against our own writer.
std::string make_wav(const std::vector<std::int16_t>& samples, int channels, int rate, int bits = 16, int format = 1)
{
    std::string data;
    for (auto v: samples)
        put_u16(data, static_cast<std::uint16_t>(v));
    std::string s = "RIFF";
    put_u32(s, static_cast<std::uint32_t>(36 + data.size()));
    s += "WAVEfmt ";
    put_u32(s, 16);
    put_u16(s, static_cast<std::uint16_t>(format));
    put_u16(s, static_cast<std::uint16_t>(channels));
    put_u32(s, static_cast<std::uint32_t>(rate));
    put_u32(s, static_cast<std::uint32_t>(rate * channels * bits / 8));
    put_u16(s, static_cast<std::uint16_t>(channels * bits / 8));
    put_u16(s, static_cast<std::uint16_t>(bits));
    s += "data";
    put_u32(s, static_cast<std::uint32_t>(data.size()));
    return s + data;
}

void write_bytes(const fs::path& p, const std::string& bytes)
{
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

TEST(WavIo, SilenceLoadsAsZeros)
{
    const auto p = scratch("silence.wav");
    write_bytes(p, make_wav(std::vector<std::int16_t>(16000, 0), 1, 16000));
    const auto w = load_wav(p);
    EXPECT_EQ(w.size(), 16000u);
    EXPECT_EQ(w.sample_rate(), 16000);
    for (double v: w.samples())
        ASSERT_EQ(v, 0.0);
}

TEST(WavIo, FullScaleSquareMapsToBounds)
{
    std::vector<std::int16_t> sq;
    for (int i = 0; i < 64; ++i)
        sq.push_back((i / 8) % 2 ? std::int16_t{-32768} : std::int16_t{32767});
    const auto w = decode_wav(make_wav(sq, 1, 16000));
    for (std::size_t i = 0; i < sq.size(); ++i)
        EXPECT_EQ(w[i], sq[i] == 32767 ? 32767.0 / 32768.0 : -1.0);
}

TEST(WavIo, StereoIsDownmixedByMean)
{
    const auto w = decode_wav(make_wav({1000, 3000, -200, 200, 32767, -32768}, 2, 8000));
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w.sample_rate(), 8000);
    EXPECT_DOUBLE_EQ(w[0], 2000.0 / 32768.0);
    EXPECT_DOUBLE_EQ(w[1], 0.0);
    EXPECT_DOUBLE_EQ(w[2], -0.5 / 32768.0);
}

TEST(WavIo, RoundTripIsBitIdentical)
{
    std::mt19937 gen(7);
    std::uniform_int_distribution<int> dist(-32768, 32767);
    std::vector<std::int16_t> pcm(5000);
    for (auto& v: pcm)
        v = static_cast<std::int16_t>(dist(gen));
    const auto original = make_wav(pcm, 1, 16000);
    const auto p = scratch("roundtrip.wav");
    store_wav(decode_wav(original), p);
    const auto again = read_bytes(p);
    ASSERT_EQ(again.size(), original.size());
    EXPECT_EQ(again.substr(44), original.substr(44));
    EXPECT_EQ(decode_wav(again), decode_wav(original));
}

TEST(WavIo, QuantizationRoundsHalfAwayAndClamps)
{
    EXPECT_EQ(quantize_pcm16(1.5), 32767);
    EXPECT_EQ(quantize_pcm16(-1.0), -32768);
    EXPECT_EQ(quantize_pcm16(-3.0), -32768);
    EXPECT_EQ(quantize_pcm16(0.5 / 32768.0), 1);
    EXPECT_EQ(quantize_pcm16(-0.5 / 32768.0), -1);
    EXPECT_EQ(quantize_pcm16(0.49 / 32768.0), 0);
}

TEST(WavIo, ZeroWaveformWritesZeroData)
{
    const auto bytes = encode_wav(Waveform::zeros(100));
    ASSERT_EQ(bytes.size(), 44u + 200u);
    for (std::size_t i = 44; i < bytes.size(); ++i)
        ASSERT_EQ(bytes[i], '\0');
}

TEST(WavIo, ErrorsAreDistinct)
{
    EXPECT_THROW((void)load_wav(scratch("does_not_exist.wav")), FileNotFoundError);
    EXPECT_THROW((void)decode_wav(make_wav({1, 2, 3, 4}, 1, 16000, 16, 3)), UnsupportedFormatError);
    EXPECT_THROW((void)decode_wav(make_wav({1, 2, 3, 4}, 1, 16000, 8)), UnsupportedFormatError);
    EXPECT_THROW((void)decode_wav(std::string("RIFF\x10\0\0\0WAVE", 12)), TruncatedFileError);
    EXPECT_THROW((void)decode_wav("RIFF"), TruncatedFileError);
    auto cut = make_wav({1, 2, 3, 4, 5, 6}, 1, 16000);
    cut.resize(cut.size() - 5);
    EXPECT_THROW((void)decode_wav(cut), TruncatedFileError);
    EXPECT_THROW((void)decode_wav(std::string(64, 'x')), UnsupportedFormatError);
}

TEST(WavIo, StoreRejectsEmptyAndUnwritable)
{
    EXPECT_THROW(store_wav(Waveform(), scratch("empty.wav")), InvalidArgumentError);
    EXPECT_THROW(store_wav(Waveform::zeros(10), "/nonexistent_dir_tws/x.wav"), WriteError);
}

TEST(Waveform, RejectsNonFiniteAndBadRate)
{
    EXPECT_THROW(Waveform({0.0, std::nan("")}, 16000), InvalidArgumentError);
    EXPECT_THROW(Waveform({0.0}, 0), InvalidArgumentError);
}

} // namespace
