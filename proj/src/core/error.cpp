// SPDX-License-Identifier: Apache-2.0
#include "tws/core/error.hpp"

namespace tws
{

FileNotFoundError::FileNotFoundError(const std::string& path): DataError("file not found: " + path)
{
}

SampleRateMismatchError::SampleRateMismatchError(int a, int b):
    InvalidArgumentError("sample rate mismatch: " + std::to_string(a) + " Hz vs " + std::to_string(b) + " Hz")
{
}

LengthMismatchError::LengthMismatchError(std::size_t a, std::size_t b):
    InvalidArgumentError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b) + " samples")
{
}

} // namespace tws
