// SPDX-License-Identifier: Apache-2.0
#include "tws/core/synth.hpp"
#include "tws/engine/answer.hpp"
#include "tws/engine/loop.hpp"
#include "tws/engine/scripted_backend.hpp"
#include "tws/engine/tool_call.hpp"
#include "tws/engine/trace_io.hpp"
#include "tws/perturb/noise.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace
{

using namespace tws;
using namespace tws::engine;

Waveform noisy_clip()
{
    Rng rng(5);
    const auto clean = synth::speech_like({.f0_hz = 150.0, .duration_s = 1.5}, rng);
    Rng noise_rng(6);
    return perturb::add_noise_at_snr(clean, {.snr_db = 5.0}, noise_rng);
}

ScriptedBackend script(std::vector<std::string> lines)
{
    return ScriptedBackend(std::move(lines));
}

/// Counts calls; answers with a fixed text.
class CountingBackend final : public ModelBackend
{
  public:
    explicit CountingBackend(std::string text) : _text(std::move(text)) {}
    std::string complete(const BackendRequest&) const override
    {
        ++calls;
        return _text;
    }
    std::string id() const override { return "counting"; }
    mutable std::atomic<int> calls{0};

  private:
    std::string _text;
};

void check_invariants(const ReasoningTrace& t)
{
    EXPECT_LE(t.steps_used, t.k_max);
    if (t.terminated_by == Termination::KMaxReached)
        EXPECT_EQ(t.steps_used, t.k_max);
    EXPECT_EQ(t.final_answer.has_value(), t.terminated_by == Termination::AnswerFound);
    std::size_t produced = 0;
    for (std::size_t i = 0; i < t.turns.size(); ++i)
    {
        const auto& turn = t.turns[i];
        if (turn.role == Role::Tool)
        {
            ASSERT_GT(i, 0u);
            EXPECT_EQ(t.turns[i - 1].role, Role::Assistant);
            EXPECT_TRUE(find_tool_marker(t.turns[i - 1].text).has_value());
            if (turn.audio_ref)
                EXPECT_EQ(*turn.audio_ref, ++produced);
        }
    }
    EXPECT_EQ(t.audio_versions.size(), produced + 1);
}

TEST(Loop, ImmediateAnswer)
{
    const auto reg = ops::default_registry();
    const auto t = run_tws(noisy_clip(), "", reg, script({"Sounds calm.\nEmotion: neutral"}));
    check_invariants(t);
    EXPECT_EQ(t.steps_used, 1u);
    EXPECT_EQ(t.audio_versions.size(), 1u);
    EXPECT_EQ(t.terminated_by, Termination::AnswerFound);
    EXPECT_EQ(t.final_answer, Emotion::Neutral);
}

TEST(Loop, StepCap)
{
    const auto reg = ops::default_registry();
    for (std::size_t k: {1u, 2u, 5u})
    {
        std::vector<std::string> lines(k + 3, "[TOOL: normalize_loudness(target_dbfs=-20)]");
        lines.push_back("Emotion: joy");
        const auto t = run_tws(noisy_clip(), "", reg, script(lines), {.k_max = k});
        check_invariants(t);
        EXPECT_EQ(t.steps_used, k);
        EXPECT_EQ(t.terminated_by, Termination::KMaxReached);
        EXPECT_FALSE(t.final_answer.has_value());
    }
    EXPECT_THROW((void)run_tws(noisy_clip(), "", reg, script({"x"}), {.k_max = 0}), InvalidArgumentError);
}

TEST(Loop, PureReasoningStepsContinue)
{
    const auto reg = ops::default_registry();
    const auto t = run_tws(noisy_clip(), "", reg, script({"Hmm.", "Listening again.", "Emotion: fear"}));
    check_invariants(t);
    EXPECT_EQ(t.steps_used, 3u);
    EXPECT_EQ(t.final_answer, Emotion::Fear);
}

TEST(Loop, ToolThenAnswerReplays)
{
    const auto reg = ops::default_registry();
    const auto x = noisy_clip();
    const auto backend = script({"Noisy. [TOOL: denoise(over_subtraction=2.0)]", "Emotion: sadness"});
    const auto t = run_tws(x, "", reg, backend, {.record_id = "r1"});
    check_invariants(t);
    ASSERT_EQ(t.audio_versions.size(), 2u);
    EXPECT_EQ(t.steps_used, 2u);
    EXPECT_EQ(t.final_answer, Emotion::Sadness);
    EXPECT_EQ(t.operators_invoked(), std::vector<std::string>{"denoise"});
    EXPECT_EQ(t.turns[3].role, Role::Tool);
    EXPECT_TRUE(t.turns[3].text.starts_with("denoise: AUDIO_UPDATED"));
    EXPECT_EQ(t.turns[4].audio_ref, std::size_t{1});

    const auto again = run_tws(x, "", reg, backend, {.record_id = "r1"});
    EXPECT_EQ(to_json(again).dump(), to_json(t).dump());

    const auto versions = replay(x, t.turns, reg);
    ASSERT_EQ(versions.size(), t.audio_versions.size());
    EXPECT_EQ(versions.back().data(), t.audio_versions.back().data());
}

TEST(Loop, ThreadedAudioReplaysByteExact)
{
    const auto reg = ops::default_registry();
    const auto x = noisy_clip();
    const auto backend = script({
        "[TOOL: denoise()]",
        "[TOOL: analyze_spectrum()]",
        "[TOOL: correct_pitch(semitones=1.5)]",
        "[TOOL: restore_tempo(factor=1.2)]",
        "[TOOL: normalize_loudness()]",
        "[TOOL: dereverb()]",
        "Emotion: anger",
    });
    const auto t = run_tws(x, "", reg, backend, {.k_max = 8});
    check_invariants(t);
    EXPECT_EQ(t.audio_versions.size(), 6u);
    EXPECT_EQ(t.final_answer, Emotion::Anger);

    const auto versions = replay(x, t.turns, reg);
    ASSERT_EQ(versions.size(), t.audio_versions.size());
    for (std::size_t i = 0; i < versions.size(); ++i)
        EXPECT_EQ(audio_hash(versions[i]), audio_hash(t.audio_versions[i])) << i;
    // Each version is the operator applied to the one before it.
    EXPECT_EQ(reg.invoke("restore_tempo", t.audio_versions[2], ops::RawArgs{{"factor", "1.2"}}).audio->data(),
              t.audio_versions[3].data());
}

TEST(Loop, ToolErrorsConsumeSteps)
{
    const auto reg = ops::default_registry();
    const auto t = run_tws(noisy_clip(), "", reg,
                           script({"[TOOL: fly_to_moon()]", "[TOOL: denoise(over_subtraction=99)]", "Emotion: joy"}));
    check_invariants(t);
    EXPECT_EQ(t.steps_used, 3u);
    EXPECT_EQ(t.audio_versions.size(), 1u);
    EXPECT_TRUE(t.turns[3].text.starts_with("ERROR unknown_tool"));
    EXPECT_TRUE(t.turns[5].text.starts_with("ERROR invalid_args"));
    EXPECT_FALSE(t.turns[3].tool_call.has_value());
    EXPECT_EQ(t.final_answer, Emotion::Joy);
}

TEST(Loop, OperatorFailureKeepsAudio)
{
    const auto reg = ops::default_registry();
    const Waveform tiny(std::vector<double>(100, 0.1), kCanonicalSampleRate);
    const auto t = run_tws(tiny, "", reg, script({"[TOOL: denoise()]", "Emotion: joy"}));
    check_invariants(t);
    EXPECT_EQ(t.audio_versions.size(), 1u);
    EXPECT_TRUE(t.turns[3].text.starts_with("ERROR operator_failed: denoise"));
    EXPECT_EQ(t.final_answer, Emotion::Joy);
}

TEST(Loop, AnswerWithToolCallContinues)
{
    const auto reg = ops::default_registry();
    const auto t =
        run_tws(noisy_clip(), "", reg, script({"Emotion: sadness [TOOL: denoise()]", "Emotion: anger"}));
    check_invariants(t);
    EXPECT_EQ(t.steps_used, 2u);
    EXPECT_EQ(t.final_answer, Emotion::Anger);
}

TEST(Loop, BackendFailure)
{
    const auto reg = ops::default_registry();
    auto t = run_tws(noisy_clip(), "", reg, script({"[TOOL: denoise()]", "!ERROR"}));
    check_invariants(t);
    EXPECT_EQ(t.terminated_by, Termination::BackendError);
    EXPECT_EQ(t.steps_used, 1u);
    EXPECT_FALSE(t.error.empty());

    t = run_baseline(noisy_clip(), "", script({"!ERROR"}));
    EXPECT_EQ(t.terminated_by, Termination::BackendError);
    EXPECT_EQ(t.steps_used, 0u);
    EXPECT_FALSE(t.final_answer.has_value());
}

TEST(Loop, RetriesRecoverTransientFailure)
{
    const auto reg = ops::default_registry();
    const auto t = run_tws(noisy_clip(), "", reg, script({"!FLAKY:Emotion: surprise"}));
    EXPECT_EQ(t.terminated_by, Termination::AnswerFound);
    EXPECT_EQ(t.final_answer, Emotion::Surprise);

    const auto none = run_tws(noisy_clip(), "", reg, script({"!FLAKY:Emotion: surprise"}), {.retries = 0});
    EXPECT_EQ(none.terminated_by, Termination::BackendError);
}

TEST(Loop, Baseline)
{
    const auto t = run_baseline(noisy_clip(), "", script({"Emotion: anger"}));
    EXPECT_EQ(t.final_answer, Emotion::Anger);
    EXPECT_EQ(t.steps_used, 1u);
    EXPECT_EQ(t.mode, RunMode::Baseline);

    const auto tool = run_baseline(noisy_clip(), "", script({"[TOOL: denoise()] Emotion: fear"}));
    EXPECT_EQ(tool.final_answer, Emotion::Fear);
    EXPECT_EQ(tool.audio_versions.size(), 1u);
    EXPECT_EQ(tool.turns.size(), 3u);

    const auto none = run_baseline(noisy_clip(), "", script({"[TOOL: denoise()]"}));
    EXPECT_FALSE(none.final_answer.has_value());
    EXPECT_EQ(none.terminated_by, Termination::KMaxReached);
}

TEST(Loop, EmptyRegistryDegeneratesToBaseline)
{
    const ops::OperatorRegistry empty;
    const auto x = noisy_clip();
    const std::vector<std::vector<std::string>> scripts = {
        {"Emotion: joy"},
        {"[TOOL: denoise()]", "Emotion: joy"},
        {"thinking", "Emotion: fear"},
        {"Emotion: anger [TOOL: denoise()]", "Emotion: joy"},
        {"!ERROR"},
    };
    for (const auto& s: scripts)
    {
        const auto backend = script(s);
        const auto base = run_baseline(x, "", backend);
        for (std::size_t k: {1u, 3u, 5u})
        {
            const auto tws = run_tws(x, "", empty, backend, {.k_max = k});
            check_invariants(tws);
            EXPECT_EQ(tws.final_answer, base.final_answer);
            EXPECT_EQ(tws.terminated_by, base.terminated_by);
            EXPECT_EQ(tws.turns, base.turns);
        }
    }
    CountingBackend counting("Emotion: joy");
    EXPECT_EQ(run_tws(x, "", empty, counting).final_answer, run_baseline(x, "", counting).final_answer);
    EXPECT_EQ(counting.calls.load(), 2);
}

TEST(Loop, PerRecordScripts)
{
    const ScriptedBackend backend = ScriptedBackend::from_json(nlohmann::json::parse(
        R"({"default": ["Emotion: neutral"], "records": {"a": ["[TOOL: denoise()]", "Emotion: joy"]}})"));
    const auto reg = ops::default_registry();
    EXPECT_EQ(run_tws(noisy_clip(), "", reg, backend, {.record_id = "a"}).final_answer, Emotion::Joy);
    EXPECT_EQ(run_tws(noisy_clip(), "", reg, backend, {.record_id = "b"}).final_answer, Emotion::Neutral);
    EXPECT_THROW((void)ScriptedBackend::from_json(nlohmann::json::parse(R"({"default": [1]})")), DataError);

    const ScriptedBackend empty({});
    EXPECT_EQ(run_tws(noisy_clip(), "", reg, empty).terminated_by, Termination::BackendError);
}

TEST(TraceIo, RoundTrip)
{
    const auto reg = ops::default_registry();
    const auto x = noisy_clip();
    const auto t = run_tws(x, "", reg,
                           script({"[TOOL: denoise(over_subtraction=\"2.5\")]", "[TOOL: track_pitch()]",
                                   "[TOOL: restore_tempo(factor=1.1)]", "Emotion: disgust"}),
                           {.record_id = "dia1/utt2"});
    const auto dir = std::filesystem::temp_directory_path() / "tws_trace_io";
    std::filesystem::create_directories(dir);
    const auto path = trace_path(dir, t.record_id);
    EXPECT_EQ(path.filename(), "dia1_utt2.json");
    write_trace(t, path);

    const auto stored = read_trace(path);
    EXPECT_EQ(stored.trace.turns, t.turns);
    EXPECT_EQ(stored.trace.final_answer, t.final_answer);
    EXPECT_EQ(stored.trace.steps_used, t.steps_used);
    EXPECT_EQ(stored.trace.terminated_by, t.terminated_by);
    ASSERT_EQ(stored.audio_hashes.size(), 3u);

    const auto versions = replay(x, stored.trace.turns, reg);
    ASSERT_EQ(versions.size(), stored.audio_hashes.size());
    for (std::size_t i = 0; i < versions.size(); ++i)
    {
        EXPECT_EQ(audio_hash_hex(versions[i]), stored.audio_hashes[i]);
        EXPECT_EQ(versions[i].size(), stored.audio_lengths[i]);
    }

    std::ofstream(dir / "bad.json") << "{not json";
    EXPECT_THROW((void)read_trace(dir / "bad.json"), DataError);
    EXPECT_THROW((void)read_trace(dir / "missing.json"), FileNotFoundError);
    std::filesystem::remove_all(dir);
}

TEST(TraceIo, DeterministicAcrossThreads)
{
    const auto reg = ops::default_registry();
    const auto x = noisy_clip();
    const auto backend = script({"[TOOL: denoise()]", "[TOOL: correct_pitch(semitones=-1)]", "Emotion: joy"});
    const std::string ref = to_json(run_tws(x, "", reg, backend)).dump();
    std::vector<std::string> out(4);
    {
        std::vector<std::jthread> threads;
        for (std::size_t i = 0; i < out.size(); ++i)
            threads.emplace_back([&, i] { out[i] = to_json(run_tws(x, "", reg, backend)).dump(); });
    }
    for (const auto& s: out)
        EXPECT_EQ(s, ref);
}

TEST(TraceIo, AudioHash)
{
    const Waveform a(std::vector<double>{0.0, 0.5}, 16000);
    const Waveform b(std::vector<double>{-0.0, 0.5}, 16000);
    const Waveform c(std::vector<double>{0.0, 0.5}, 8000);
    EXPECT_NE(audio_hash(a), audio_hash(b));
    EXPECT_NE(audio_hash(a), audio_hash(c));
    EXPECT_EQ(audio_hash_hex(a).size(), 16u);
}

} // namespace
