// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/error.hpp"
#include "tws/core/waveform.hpp"
#include "tws/engine/trace.hpp"

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace tws::engine
{

/// A model call failed; the loop retries and then gives up.
class BackendError : public Error
{
  public:
    using Error::Error;
};

struct BackendRequest
{
    std::span<const ChatTurn> turns;
    /// Current audio version; re-attached on every call.
    const Waveform& audio;
    std::string_view record_id;
    /// Zero-based index of the assistant turn being produced.
    std::size_t step = 0;
    /// Zero-based retry attempt for this step.
    std::size_t attempt = 0;
};

/// Produces the next assistant text. Implementations must be safe to call
/// concurrently and must not keep per-call state between calls.
class ModelBackend
{
  public:
    virtual ~ModelBackend() = default;

    /// Throws BackendError on failure.
    [[nodiscard]] virtual std::string complete(const BackendRequest& request) const = 0;
    [[nodiscard]] virtual std::string id() const = 0;
    /// Cap on concurrent calls; 0 means no cap.
    [[nodiscard]] virtual std::size_t max_parallelism() const { return 0; }
    /// Delay before the first retry; doubled for each further retry.
    [[nodiscard]] virtual std::chrono::milliseconds retry_backoff() const { return std::chrono::milliseconds{0}; }
};

} // namespace tws::engine
