// SPDX-License-Identifier: Apache-2.0
#include "tws/core/wav_io.hpp"

#include "tws/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>

namespace tws
{

namespace
{

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(std::string_view b, std::size_t at)
{
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at])
                                      | (static_cast<unsigned char>(b[at + 1]) << 8));
}

std::uint32_t read_u32(std::string_view b, std::size_t at)
{
    return static_cast<std::uint32_t>(read_u16(b, at)) | (static_cast<std::uint32_t>(read_u16(b, at + 2)) << 16);
}

void put_u16(std::string& out, std::uint16_t v)
{
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v)
{
    put_u16(out, static_cast<std::uint16_t>(v & 0xFFFF));
    put_u16(out, static_cast<std::uint16_t>(v >> 16));
}

struct FormatChunk
{
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
};

} // namespace

Waveform decode_wav(std::string_view bytes)
{
    if (bytes.size() < 12)
        throw TruncatedFileError("WAV header truncated: " + std::to_string(bytes.size()) + " bytes");
    if (bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE")
        throw UnsupportedFormatError("not a RIFF/WAVE container");

    std::optional<FormatChunk> fmt;
    std::optional<std::string_view> data;
    std::size_t pos = 12;
    while (pos < bytes.size())
    {
        if (pos + 8 > bytes.size())
            throw TruncatedFileError("chunk header truncated at offset " + std::to_string(pos));
        const auto id = bytes.substr(pos, 4);
        const std::uint32_t size = read_u32(bytes, pos + 4);
        const std::size_t body = pos + 8;
        if (id == "fmt ")
        {
            if (size < 16 || body + 16 > bytes.size())
                throw TruncatedFileError("fmt chunk truncated");
            FormatChunk f;
            f.format = read_u16(bytes, body);
            f.channels = read_u16(bytes, body + 2);
            f.sample_rate = read_u32(bytes, body + 4);
            f.bits = read_u16(bytes, body + 14);
            if (f.format == kFormatExtensible && size >= 26 && body + 26 <= bytes.size())
                f.format = read_u16(bytes, body + 24);
            fmt = f;
        }
        else if (id == "data")
        {
            if (body + size > bytes.size())
                throw TruncatedFileError("data chunk declares " + std::to_string(size) + " bytes, "
                                         + std::to_string(bytes.size() - body) + " present");
            data = bytes.substr(body, size);
        }
        pos = body + size + (size & 1U);
        if (fmt && data)
            break;
    }

    if (!fmt)
        throw TruncatedFileError("missing fmt chunk");
    if (fmt->format != kFormatPcm)
        throw UnsupportedFormatError("unsupported codec tag " + std::to_string(fmt->format) + " (PCM only)");
    if (fmt->bits != 16)
        throw UnsupportedFormatError("unsupported bit depth " + std::to_string(fmt->bits) + " (16 only)");
    if (fmt->channels != 1 && fmt->channels != 2)
        throw UnsupportedFormatError("unsupported channel count " + std::to_string(fmt->channels));
    if (fmt->sample_rate == 0)
        throw UnsupportedFormatError("zero sample rate");
    if (!data)
        throw TruncatedFileError("missing data chunk");

    const std::size_t frame_bytes = 2U * fmt->channels;
    const std::size_t frames = data->size() / frame_bytes;
    std::vector<double> samples(frames);
    for (std::size_t i = 0; i < frames; ++i)
    {
        double acc = 0.0;
        for (std::size_t c = 0; c < fmt->channels; ++c)
            acc += static_cast<std::int16_t>(read_u16(*data, i * frame_bytes + 2 * c));
        samples[i] = acc / (32768.0 * fmt->channels);
    }
    return Waveform(std::move(samples), static_cast<int>(fmt->sample_rate));
}

Waveform load_wav(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileNotFoundError(path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_wav(bytes);
}

std::int16_t quantize_pcm16(double sample) noexcept
{
    const double scaled = std::round(sample * 32768.0);
    return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

std::string encode_wav(const Waveform& w)
{
    if (w.empty())
        throw InvalidArgumentError("cannot store an empty waveform");
    const auto data_bytes = static_cast<std::uint32_t>(w.size() * 2);
    std::string out;
    out.reserve(44 + data_bytes);
    out += "RIFF";
    put_u32(out, 36 + data_bytes);
    out += "WAVEfmt ";
    put_u32(out, 16);
    put_u16(out, kFormatPcm);
    put_u16(out, 1);
    put_u32(out, static_cast<std::uint32_t>(w.sample_rate()));
    put_u32(out, static_cast<std::uint32_t>(w.sample_rate()) * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    out += "data";
    put_u32(out, data_bytes);
    for (double s: w.samples())
        put_u16(out, static_cast<std::uint16_t>(quantize_pcm16(s)));
    return out;
}

void store_wav(const Waveform& w, const std::filesystem::path& path)
{
    const std::string bytes = encode_wav(w);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw WriteError("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw WriteError("write failed: " + path.string());
}

} // namespace tws
