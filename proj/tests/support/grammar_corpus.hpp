// SPDX-License-Identifier: Apache-2.0
// Tool-call grammar cases shared by the unit and acceptance tests.
#pragma once

#include "tws/engine/tool_call.hpp"

#include <string>
#include <variant>
#include <vector>

namespace tws::testing
{

struct NoCall
{
};
struct Unknown
{
};
struct Invalid
{
};
using Expected = std::variant<NoCall, engine::ToolCall, Unknown, Invalid>;

struct GrammarCase
{
    std::string text;
    Expected expected;
};

inline engine::ToolCall tc(std::string name, ops::RawArgs args = {})
{
    return {std::move(name), std::move(args)};
}

// Valid calls, texts without a call, unknown tools and malformed arguments.
inline const std::vector<GrammarCase>& grammar_corpus()
{
    static const std::vector<GrammarCase> cases = {
        {"I will clean it first. [TOOL: denoise(over_subtraction=2.0)]", tc("denoise", {{"over_subtraction", "2.0"}})},
        {"[TOOL: dereverb()]", tc("dereverb")},
        {"[tool: DENOISE()]", tc("denoise")},
        {"[TOOL:correct_pitch(semitones=-2.5)]", tc("correct_pitch", {{"semitones", "-2.5"}})},
        {"[ TOOL : restore_tempo( factor = 1.25 ) ]", tc("restore_tempo", {{"factor", "1.25"}})},
        {"[TOOL: normalize_loudness(target_dbfs=\"-20\")]", tc("normalize_loudness", {{"target_dbfs", "-20"}})},
        {"[TOOL: normalize_loudness(target_dbfs='-18.5')]", tc("normalize_loudness", {{"target_dbfs", "-18.5"}})},
        {"Two calls [TOOL: analyze_spectrum()] then [TOOL: denoise()]", tc("analyze_spectrum")},
        {"Multi\nline\n[TOOL: track_pitch()]\nwaiting", tc("track_pitch")},
        {"[TOOL: Correct_Pitch(SEMITONES=3)]", tc("correct_pitch", {{"SEMITONES", "3"}})},
        {"Emotion: joy [TOOL: extract_voice()]", tc("extract_voice")},
        {"[TOOL: restore_tempo(factor=1.1), ]", Invalid{}},

        {"The emotion is clear. Emotion: joy", NoCall{}},
        {"", NoCall{}},
        {"TOOL: denoise()", NoCall{}},
        {"[TOOLS: denoise()]", NoCall{}},
        {"I could call denoise(over_subtraction=2) but will not.", NoCall{}},
        {"[NOTE: denoise()]", NoCall{}},
        {"Use the format [TOOL  denoise()]", NoCall{}},
        {"toolbox: [tool]", NoCall{}},

        {"[TOOL: fly_to_moon()]", Unknown{}},
        {"[TOOL: denoise_more(over_subtraction=2)]", Unknown{}},
        {"[TOOL: identity()]", Unknown{}},
        {"[TOOL: analyze()]", Unknown{}},
        {"[TOOL: pitch_shift(semitones=2)]", Unknown{}},

        {"[TOOL: denoise(over_subtraction=)]", Invalid{}},
        {"[TOOL: denoise(over_subtraction=abc)]", Invalid{}},
        {"[TOOL: denoise(over_subtraction=9)]", Invalid{}},
        {"[TOOL: denoise(strength=1)]", Invalid{}},
        {"[TOOL: denoise(over_subtraction=2, over_subtraction=3)]", Invalid{}},
        {"[TOOL: denoise(over_subtraction=2]", Invalid{}},
        {"[TOOL: denoise over_subtraction=2]", Invalid{}},
        {"[TOOL: correct_pitch(2)]", Invalid{}},
        {"[TOOL: denoise()", Invalid{}},
        {"[TOOL: ]", Invalid{}},
        {"[TOOL: restore_tempo(factor=\"1.2)]", Invalid{}},
        {"[TOOL: correct_pitch(semitones=1 2)]", Invalid{}},
    };
    return cases;
}

} // namespace tws::testing
