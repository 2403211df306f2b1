// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tws
{

/// Root of every error raised by the toolkit.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Problems with input data: files, formats, manifests, labels.
class DataError : public Error
{
  public:
    using Error::Error;
};

class FileNotFoundError : public DataError
{
  public:
    explicit FileNotFoundError(const std::string& path);
};

class UnsupportedFormatError : public DataError
{
  public:
    using DataError::DataError;
};

class TruncatedFileError : public DataError
{
  public:
    using DataError::DataError;
};

class WriteError : public DataError
{
  public:
    using DataError::DataError;
};

/// A precondition on a numeric argument or signal was violated.
class InvalidArgumentError : public Error
{
  public:
    using Error::Error;
};

class SignalTooShortError : public InvalidArgumentError
{
  public:
    using InvalidArgumentError::InvalidArgumentError;
};

class SampleRateMismatchError : public InvalidArgumentError
{
  public:
    SampleRateMismatchError(int a, int b);
};

class LengthMismatchError : public InvalidArgumentError
{
  public:
    LengthMismatchError(std::size_t a, std::size_t b);
};

class ZeroPowerError : public InvalidArgumentError
{
  public:
    using InvalidArgumentError::InvalidArgumentError;
};

} // namespace tws
