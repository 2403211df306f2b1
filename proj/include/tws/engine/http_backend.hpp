// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/engine/backend.hpp"

#include <json.hpp>

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>

namespace tws::engine
{

inline constexpr std::size_t kDefaultHttpInFlight = 4;

struct HttpBackendOptions
{
    /// e.g. "https://api.example.com/v1"; "/chat/completions" is appended.
    std::string base_url;
    std::string api_key;
    std::string model;
    double temperature = 0.0;
    double top_p = 0.95;
    std::chrono::seconds timeout{120};
    std::size_t max_in_flight = kDefaultHttpInFlight;
    std::chrono::milliseconds backoff{500};
};

/// Reads TWS_API_BASE, TWS_API_KEY and TWS_MODEL. Throws InvalidArgumentError
/// when TWS_API_BASE is unset.
[[nodiscard]] HttpBackendOptions http_options_from_env();

[[nodiscard]] std::string base64_encode(std::string_view bytes);

/// Chat-completions body. Tool results travel as user messages prefixed with
/// "Tool result:"; the current audio (16-bit WAV, base64) is attached to the
/// last user-side message only.
[[nodiscard]] nlohmann::json build_chat_request(const HttpBackendOptions& options, const BackendRequest& request);

/// choices[0].message.content; throws BackendError on anything else.
[[nodiscard]] std::string parse_chat_response(std::string_view body);

class HttpBackend final : public ModelBackend
{
  public:
    explicit HttpBackend(HttpBackendOptions options);
    ~HttpBackend() override;

    [[nodiscard]] std::string complete(const BackendRequest& request) const override;
    [[nodiscard]] std::string id() const override;
    [[nodiscard]] std::size_t max_parallelism() const override { return _options.max_in_flight; }
    [[nodiscard]] std::chrono::milliseconds retry_backoff() const override { return _options.backoff; }

  private:
    struct Gate;
    HttpBackendOptions _options;
    std::string _origin;
    std::string _path;
    std::unique_ptr<Gate> _gate;
};

} // namespace tws::engine
