// SPDX-License-Identifier: Apache-2.0
#include "tws/engine/http_backend.hpp"

#include "tws/core/wav_io.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <openssl/evp.h>

#include <cstdlib>
#include <regex>
#include <semaphore>

namespace tws::engine
{

namespace
{

constexpr std::ptrdiff_t kMaxInFlight = 256;

std::string env_or_empty(const char* name)
{
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
}

} // namespace

struct HttpBackend::Gate
{
    explicit Gate(std::ptrdiff_t n) : sem(n) {}
    std::counting_semaphore<kMaxInFlight> sem;
};

HttpBackendOptions http_options_from_env()
{
    HttpBackendOptions o;
    o.base_url = env_or_empty("TWS_API_BASE");
    o.api_key = env_or_empty("TWS_API_KEY");
    o.model = env_or_empty("TWS_MODEL");
    if (o.base_url.empty())
        throw InvalidArgumentError("TWS_API_BASE is not set");
    return o;
}

std::string base64_encode(std::string_view bytes)
{
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

nlohmann::json build_chat_request(const HttpBackendOptions& options, const BackendRequest& request)
{
    nlohmann::json messages = nlohmann::json::array();
    std::optional<std::size_t> last_listener;
    for (const auto& t: request.turns)
    {
        switch (t.role)
        {
            case Role::System: messages.push_back({{"role", "system"}, {"content", t.text}}); break;
            case Role::User:
                last_listener = messages.size();
                messages.push_back({{"role", "user"}, {"content", t.text}});
                break;
            case Role::Assistant: messages.push_back({{"role", "assistant"}, {"content", t.text}}); break;
            case Role::Tool:
                last_listener = messages.size();
                messages.push_back({{"role", "user"}, {"content", "Tool result: " + t.text}});
                break;
        }
    }
    if (last_listener)
    {
        auto& msg = messages[*last_listener];
        const std::string text = msg["content"].get<std::string>();
        msg["content"] = nlohmann::json::array({
            {{"type", "text"}, {"text", text}},
            {{"type", "input_audio"},
             {"input_audio", {{"data", base64_encode(encode_wav(request.audio))}, {"format", "wav"}}}},
        });
    }
    nlohmann::json body;
    if (!options.model.empty())
        body["model"] = options.model;
    body["messages"] = std::move(messages);
    body["temperature"] = options.temperature;
    body["top_p"] = options.top_p;
    return body;
}

std::string parse_chat_response(std::string_view body)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(body);
        const auto& content = j.at("choices").at(0).at("message").at("content");
        if (content.is_string())
            return content.get<std::string>();
        std::string text;
        for (const auto& part: content)
            if (part.value("type", std::string()) == "text")
                text += part.at("text").get<std::string>();
        return text;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw BackendError(std::string("unexpected chat response: ") + e.what());
    }
}

HttpBackend::HttpBackend(HttpBackendOptions options) : _options(std::move(options))
{
    static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(_options.base_url, m, kUrl))
        throw InvalidArgumentError("API base must be an http(s) URL: " + _options.base_url);
    _origin = m[1].str();
    _path = m[2].str();
    while (!_path.empty() && _path.back() == '/')
        _path.pop_back();
    _path += "/chat/completions";
    if (_options.max_in_flight == 0 || _options.max_in_flight > static_cast<std::size_t>(kMaxInFlight))
        throw InvalidArgumentError(fmt::format("max_in_flight must lie in [1, {}]", kMaxInFlight));
    _gate = std::make_unique<Gate>(static_cast<std::ptrdiff_t>(_options.max_in_flight));
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::id() const
{
    return _options.model.empty() ? "http" : "http:" + _options.model;
}

std::string HttpBackend::complete(const BackendRequest& request) const
{
    const std::string body = build_chat_request(_options, request).dump();

    _gate->sem.acquire();
    struct Release
    {
        Gate& g;
        ~Release() { g.sem.release(); }
    } release{*_gate};

    httplib::Client client(_origin);
    const auto secs = static_cast<time_t>(_options.timeout.count());
    client.set_connection_timeout(secs, 0);
    client.set_read_timeout(secs, 0);
    client.set_write_timeout(secs, 0);
    httplib::Headers headers;
    if (!_options.api_key.empty())
        headers.emplace("Authorization", "Bearer " + _options.api_key);

    const auto res = client.Post(_path, headers, body, "application/json");
    if (!res)
        throw BackendError(fmt::format("request to {}{} failed: {}", _origin, _path, httplib::to_string(res.error())));
    if (res->status != 200)
        throw BackendError(fmt::format("backend returned HTTP {}: {}", res->status, res->body.substr(0, 200)));
    return parse_chat_response(res->body);
}

} // namespace tws::engine
