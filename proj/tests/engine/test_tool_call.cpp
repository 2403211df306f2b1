// SPDX-License-Identifier: Apache-2.0
#include "../support/grammar_corpus.hpp"

#include "tws/engine/tool_call.hpp"

#include <gtest/gtest.h>

#include <variant>

namespace
{

using namespace tws;
using namespace tws::engine;
using namespace tws::testing;

TEST(ToolCallGrammar, CorpusHasEveryClass)
{
    std::array<int, 4> counts{};
    for (const auto& c: grammar_corpus())
        ++counts[c.expected.index()];
    EXPECT_GE(grammar_corpus().size(), 30u);
    for (int n: counts)
        EXPECT_GE(n, 5);
}

TEST(ToolCallGrammar, Corpus)
{
    const auto reg = ops::default_registry();
    for (const auto& c: grammar_corpus())
    {
        SCOPED_TRACE(c.text);
        if (const auto* want = std::get_if<ToolCall>(&c.expected))
        {
            const auto got = parse_tool_call(c.text, reg);
            ASSERT_TRUE(got.has_value());
            EXPECT_EQ(*got, *want);
        }
        else if (std::holds_alternative<NoCall>(c.expected))
        {
            EXPECT_FALSE(parse_tool_call(c.text, reg).has_value());
            EXPECT_FALSE(find_tool_marker(c.text).has_value());
        }
        else if (std::holds_alternative<Unknown>(c.expected))
            EXPECT_THROW((void)parse_tool_call(c.text, reg), UnknownToolError);
        else
            EXPECT_THROW((void)parse_tool_call(c.text, reg), InvalidArgsError);
    }
}

TEST(ToolCallGrammar, NoneExactlyWithoutMarker)
{
    const auto reg = ops::default_registry();
    for (const auto& c: grammar_corpus())
    {
        const bool marker = find_tool_marker(c.text).has_value();
        bool none = false;
        try
        {
            none = !parse_tool_call(c.text, reg).has_value();
        }
        catch (const InvalidArgumentError&)
        {
        }
        EXPECT_EQ(none, !marker) << c.text;
    }
}

TEST(ToolCallGrammar, RenderParsesBack)
{
    const auto reg = ops::default_registry();
    const ToolCall call = tc("correct_pitch", {{"semitones", "-3.25"}});
    EXPECT_EQ(render(call), "[TOOL: correct_pitch(semitones=-3.25)]");
    EXPECT_EQ(parse_tool_call(render(call), reg), call);
}

TEST(ToolCallGrammar, UnknownBeforeSyntax)
{
    const auto reg = ops::default_registry();
    EXPECT_THROW((void)parse_tool_call("[TOOL: fly_to_moon(", reg), UnknownToolError);
    EXPECT_THROW((void)parse_tool_call("[TOOL: denoise()]", ops::OperatorRegistry{}), UnknownToolError);
}

} // namespace
