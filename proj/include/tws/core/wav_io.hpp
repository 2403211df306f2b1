// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace tws
{

/// Reads a RIFF/WAVE PCM 16-bit file (mono or stereo). Stereo is downmixed by
/// channel mean; integers map to [−1, 1) by division by 32768.
///
/// Throws FileNotFoundError, UnsupportedFormatError or TruncatedFileError.
[[nodiscard]] Waveform load_wav(const std::filesystem::path& path);

/// Parses an in-memory WAV image with the same rules as load_wav.
[[nodiscard]] Waveform decode_wav(std::string_view bytes);

/// Writes PCM 16-bit mono. Samples are rounded half away from zero after
/// scaling by 32768, then clamped to [−32768, 32767].
///
/// Throws WriteError on an unwritable path, InvalidArgumentError when empty.
void store_wav(const Waveform& w, const std::filesystem::path& path);

/// The exact byte image store_wav writes.
[[nodiscard]] std::string encode_wav(const Waveform& w);

[[nodiscard]] std::int16_t quantize_pcm16(double sample) noexcept;

} // namespace tws
