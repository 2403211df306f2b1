// SPDX-License-Identifier: Apache-2.0
#include "tws/engine/tool_call.hpp"

#include <fmt/format.h>

#include <cctype>

namespace tws::engine
{

namespace
{

bool is_blank(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

bool ident_char(char c, bool first) noexcept
{
    const auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || (!first && std::isdigit(u));
}

class Cursor
{
  public:
    explicit Cursor(std::string_view s) : _s(s) {}

    void skip_blanks() noexcept
    {
        while (_i < _s.size() && is_blank(_s[_i]))
            ++_i;
    }
    [[nodiscard]] bool done() const noexcept { return _i >= _s.size(); }
    [[nodiscard]] char peek() const noexcept { return done() ? '\0' : _s[_i]; }
    bool eat(char c) noexcept
    {
        skip_blanks();
        if (peek() != c)
            return false;
        ++_i;
        return true;
    }
    std::string identifier()
    {
        skip_blanks();
        const std::size_t b = _i;
        while (!done() && ident_char(_s[_i], _i == b))
            ++_i;
        return std::string(_s.substr(b, _i - b));
    }
    /// Quoted string or bare token up to ',' or ')'.
    std::string value()
    {
        skip_blanks();
        if (peek() == '"' || peek() == '\'')
        {
            const char q = _s[_i++];
            std::string out;
            while (!done() && _s[_i] != q)
            {
                if (_s[_i] == '\\' && _i + 1 < _s.size())
                    ++_i;
                out += _s[_i++];
            }
            if (done())
                throw InvalidArgsError("unterminated quoted value");
            ++_i;
            return out;
        }
        const std::size_t b = _i;
        while (!done() && _s[_i] != ',' && _s[_i] != ')' && _s[_i] != ']' && _s[_i] != '(' && _s[_i] != '=')
            ++_i;
        std::string_view tok = _s.substr(b, _i - b);
        while (!tok.empty() && is_blank(tok.back()))
            tok.remove_suffix(1);
        if (tok.empty())
            throw InvalidArgsError("empty argument value");
        for (char c: tok)
            if (is_blank(c))
                throw InvalidArgsError(fmt::format("unquoted value contains a blank: '{}'", tok));
        return std::string(tok);
    }

  private:
    std::string_view _s;
    std::size_t _i = 0;
};

} // namespace

std::optional<std::size_t> find_tool_marker(std::string_view text) noexcept
{
    constexpr std::string_view kWord = "tool";
    for (std::size_t i = 0; i < text.size(); ++i)
    {
        if (text[i] != '[')
            continue;
        std::size_t j = i + 1;
        while (j < text.size() && (text[j] == ' ' || text[j] == '\t'))
            ++j;
        if (j + kWord.size() > text.size())
            return std::nullopt;
        bool word = true;
        for (std::size_t k = 0; k < kWord.size(); ++k)
            word = word && std::tolower(static_cast<unsigned char>(text[j + k])) == kWord[k];
        if (!word)
            continue;
        j += kWord.size();
        while (j < text.size() && (text[j] == ' ' || text[j] == '\t'))
            ++j;
        if (j < text.size() && text[j] == ':')
            return i;
    }
    return std::nullopt;
}

std::optional<ToolCall> parse_tool_call(std::string_view text, const ops::OperatorRegistry& registry)
{
    const auto marker = find_tool_marker(text);
    if (!marker)
        return std::nullopt;
    const std::string_view body = text.substr(text.find(':', *marker) + 1);
    Cursor c(body);

    const std::string name = c.identifier();
    if (name.empty())
        throw InvalidArgsError("tool call without an operator name");
    const auto* entry = registry.find(name);
    if (!entry)
        throw UnknownToolError(name);

    ToolCall call{entry->descriptor.name, {}};
    if (!c.eat('('))
        throw InvalidArgsError(fmt::format("expected '(' after {}", name));
    if (!c.eat(')'))
    {
        do
        {
            const std::string key = c.identifier();
            if (key.empty())
                throw InvalidArgsError("expected a parameter name");
            if (!c.eat('='))
                throw InvalidArgsError(fmt::format("expected '=' after {}", key));
            call.args.emplace_back(key, c.value());
        } while (c.eat(','));
        if (!c.eat(')'))
            throw InvalidArgsError("expected ',' or ')' in argument list");
    }
    if (!c.eat(']'))
        throw InvalidArgsError("expected ']' to close the tool call");

    (void)registry.resolve(entry->descriptor, call.args);
    return call;
}

} // namespace tws::engine
