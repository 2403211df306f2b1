// SPDX-License-Identifier: Apache-2.0
#include "tws/bench/evaluate.hpp"
#include "tws/bench/manifest.hpp"
#include "tws/bench/protocols.hpp"
#include "tws/bench/report.hpp"
#include "tws/bench/synthetic.hpp"
#include "tws/core/error.hpp"
#include "tws/engine/oracle_backend.hpp"
#include "tws/engine/scripted_backend.hpp"
#include "tws/ops/registry.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace
{

namespace fs = std::filesystem;
using namespace tws;
using namespace tws::bench;
using engine::Emotion;

fs::path fresh_dir(const std::string& name)
{
    auto d = fs::temp_directory_path() / "tws_bench_test" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

// 21 clips, three per label, perturbed with the default recipe.
struct HardFixture
{
    std::vector<EvalItem> items;
    TruthTable truths;
};

const HardFixture& hard_fixture()
{
    static const HardFixture f = [] {
        const auto dir = fresh_dir("hard_fixture");
        const auto sources = write_synthetic_corpus(dir / "src", 21, 5);
        perturb::HardSetOptions options;
        options.p_apply = 0.5;
        const auto manifest = perturb::build_hard_set(sources, dir / "hard", options);
        return HardFixture{load_eval_items(manifest), oracle_truths(manifest)};
    }();
    return f;
}

EvalItem item(std::string id, Emotion label, std::vector<perturb::PerturbationKind> kinds = {})
{
    return {std::move(id), label, synthetic_utterance(label, 3, 0), std::move(kinds)};
}

EvalRecordResult result(std::vector<perturb::PerturbationKind> kinds, bool correct, std::size_t steps,
                        std::vector<std::string> ops)
{
    EvalRecordResult r;
    r.utterance_id = "r";
    r.correct = correct;
    r.predicted_label = correct ? Emotion::Neutral : Emotion::Anger;
    r.steps_used = steps;
    r.operators_invoked = std::move(ops);
    r.perturbation_kinds = std::move(kinds);
    r.terminated_by = engine::Termination::AnswerFound;
    return r;
}

TEST(Manifest, BuildsInFileOrder)
{
    const auto dir = fresh_dir("manifest_ok");
    write_synthetic_corpus(dir, 9, 1);
    const auto records = build_manifest(dir / "audio", dir / "labels.csv");
    ASSERT_EQ(records.size(), 9u);
    EXPECT_EQ(records[0].utterance_id, "syn_0000");
    EXPECT_EQ(records[8].utterance_id, "syn_0008");
    EXPECT_EQ(records[1].label, std::string(engine::to_string(engine::emotion_at(1))));
    EXPECT_TRUE(fs::exists(records[4].source_path));

    write_text(dir / "mixed.csv", "utterance_id,label\nsyn_0002,Anger\nsyn_0001,SADNESS\n");
    const auto mixed = build_manifest(dir / "audio", dir / "mixed.csv");
    ASSERT_EQ(mixed.size(), 2u);
    EXPECT_EQ(mixed[0].utterance_id, "syn_0002");
    EXPECT_EQ(mixed[0].label, "anger");
    EXPECT_EQ(mixed[1].label, "sadness");
}

TEST(Manifest, Errors)
{
    const auto dir = fresh_dir("manifest_bad");
    write_synthetic_corpus(dir, 3, 1);
    const auto audio = dir / "audio";
    const auto expect_data_error = [&](const std::string& body, const std::string& needle) {
        write_text(dir / "l.csv", body);
        try
        {
            (void)build_manifest(audio, dir / "l.csv");
            ADD_FAILURE() << "no error for: " << body;
        }
        catch (const DataError& e)
        {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_data_error("utterance_id,label\nsyn_0000,boredom\n", "boredom");
    expect_data_error("utterance_id,label\nsyn_0000,joy\nsyn_0000,fear\n", "duplicate");
    expect_data_error("utterance_id,label\nsyn_0000,joy\nsyn_0042,fear\n", "row 3");
    expect_data_error("id,emotion\nsyn_0000,joy\n", "header");
    expect_data_error("utterance_id,label\nsyn_0000\n", "row 2");
    EXPECT_THROW((void)build_manifest(audio, dir / "absent.csv"), FileNotFoundError);
}

TEST(Manifest, LoadItemsKeepsKinds)
{
    const auto& f = hard_fixture();
    ASSERT_EQ(f.items.size(), 21u);
    std::size_t perturbed = 0;
    for (const auto& it: f.items)
    {
        EXPECT_GT(it.audio.size(), 0u);
        EXPECT_TRUE(f.truths.count(it.utterance_id));
        perturbed += it.kinds.empty() ? 0 : 1;
    }
    EXPECT_GT(perturbed, 10u);
}

TEST(Evaluate, IndependentOfParallelism)
{
    const auto& f = hard_fixture();
    const engine::OracleBackend oracle({}, f.truths);
    const auto registry = ops::default_registry();
    EvalConfig c1;
    EvalConfig c8;
    c8.parallelism = 8;
    const auto a = evaluate(f.items, oracle, registry, c1);
    const auto b = evaluate(f.items, oracle, registry, c8);
    EXPECT_EQ(to_json(a.summary).dump(), to_json(b.summary).dump());
    ASSERT_EQ(a.results.size(), b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i)
    {
        EXPECT_EQ(a.results[i].utterance_id, f.items[i].utterance_id);
        EXPECT_EQ(to_json(a.results[i]).dump(), to_json(b.results[i]).dump());
    }
    EXPECT_GT(a.summary.overall_accuracy, 0.9);
}

TEST(Evaluate, AllCategoriesExcludedIsBaseline)
{
    const auto& f = hard_fixture();
    const engine::OracleBackend oracle({}, f.truths);
    const auto registry = ops::default_registry();
    EvalConfig none;
    none.exclusions = {ops::OperatorCategory::Denoise, ops::OperatorCategory::Enhance,
                       ops::OperatorCategory::Normalize, ops::OperatorCategory::Analyze};
    EvalConfig base;
    base.mode = engine::RunMode::Baseline;
    const auto a = evaluate(f.items, oracle, registry, none);
    const auto b = evaluate(f.items, oracle, registry, base);
    EXPECT_EQ(a.summary.overall_accuracy, b.summary.overall_accuracy);
    EXPECT_EQ(a.summary.accuracy_by_kind, b.summary.accuracy_by_kind);
    EXPECT_EQ(a.summary.mean_steps, 1.0);
    EXPECT_TRUE(a.summary.operator_usage.empty());
    EXPECT_EQ(a.summary.exclusions, (std::vector<std::string>{"analyze", "denoise", "enhance", "normalize"}));
    for (std::size_t i = 0; i < a.results.size(); ++i)
        EXPECT_EQ(a.results[i].predicted_label, b.results[i].predicted_label) << a.results[i].utterance_id;
}

TEST(Evaluate, Accounting)
{
    using perturb::PerturbationKind;
    const std::vector<EvalItem> items = {
        item("a", Emotion::Joy, {PerturbationKind::AdditiveNoise}),
        item("b", Emotion::Fear, {PerturbationKind::AdditiveNoise, PerturbationKind::Reverberation}),
        item("c", Emotion::Anger),
        item("d", Emotion::Sadness, {PerturbationKind::Reverberation}),
    };
    const engine::ScriptedBackend backend(
        {}, {
                {"a", {"Emotion: joy"}},
                {"b", {"[TOOL: denoise()]", "[TOOL: analyze_spectrum()]", "Emotion: neutral"}},
                {"c", {"!ERROR"}},
                {"d", {"[TOOL: denoise()]", "Emotion: sadness"}},
            });
    const auto run = evaluate(items, backend, ops::default_registry(), {});
    const auto& s = run.summary;
    EXPECT_EQ(s.records, 4u);
    EXPECT_EQ(s.correct, 2u);
    EXPECT_EQ(s.backend_errors, 1u);
    EXPECT_DOUBLE_EQ(s.overall_accuracy, 0.5);
    EXPECT_DOUBLE_EQ(s.mean_steps, (1.0 + 3.0 + 0.0 + 2.0) / 4.0);
    EXPECT_DOUBLE_EQ(s.accuracy_by_kind.at("AdditiveNoise"), 0.5);
    EXPECT_DOUBLE_EQ(s.accuracy_by_kind.at("Reverberation"), 0.5);
    EXPECT_DOUBLE_EQ(s.accuracy_by_kind.at("clean"), 0.0);
    EXPECT_DOUBLE_EQ(s.operator_usage.at("denoise"), 2.0 / 6.0);
    EXPECT_DOUBLE_EQ(s.operator_usage.at("analyze_spectrum"), 1.0 / 6.0);
    EXPECT_EQ(s.k_max, engine::kDefaultMaxSteps);
    EXPECT_EQ(run.results[2].terminated_by, engine::Termination::BackendError);
    EXPECT_FALSE(run.results[2].predicted_label);
    EXPECT_FALSE(run.results[2].correct);
    EXPECT_EQ(run.results[1].operators_invoked, (std::vector<std::string>{"denoise", "analyze_spectrum"}));

    EvalConfig base;
    base.mode = engine::RunMode::Baseline;
    EXPECT_EQ(evaluate(items, backend, ops::default_registry(), base).summary.k_max, 1u);
}

TEST(Evaluate, WritesTraces)
{
    const auto dir = fresh_dir("traces");
    const std::vector<EvalItem> items = {item("x/1", Emotion::Joy), item("x2", Emotion::Fear)};
    const engine::ScriptedBackend backend({"[TOOL: denoise()]", "Emotion: fear"});
    EvalConfig cfg;
    cfg.trace_dir = dir / "t";
    (void)evaluate(items, backend, ops::default_registry(), cfg);
    EXPECT_TRUE(fs::exists(dir / "t" / "x_1.json"));
    EXPECT_TRUE(fs::exists(dir / "t" / "x2.json"));
}

TEST(Protocols, AblationShape)
{
    const auto& f = hard_fixture();
    const engine::OracleBackend oracle({}, f.truths);
    const auto registry = ops::default_registry();
    const auto rows = ablate_operators(f.items, oracle, registry, {});
    ASSERT_EQ(rows.size(), 6u);
    const std::vector<std::string> names = {"full",         "w/o denoise", "w/o enhance",
                                            "w/o normalize", "w/o analyze", "baseline"};
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        EXPECT_EQ(rows[i].name, names[i]);
        EXPECT_DOUBLE_EQ(rows[i].delta, rows[i].summary.overall_accuracy - rows[0].summary.overall_accuracy);
    }
    EXPECT_EQ(rows[0].delta, 0.0);
    EXPECT_EQ(rows[1].summary.exclusions, std::vector<std::string>{"denoise"});

    EvalConfig base;
    base.mode = engine::RunMode::Baseline;
    const auto direct = evaluate(f.items, oracle, registry, base).summary;
    EXPECT_EQ(to_json(rows.back().summary).dump(), to_json(direct).dump());
    EXPECT_LE(rows.back().summary.overall_accuracy, rows[0].summary.overall_accuracy);
}

TEST(Protocols, SweepShape)
{
    const auto& f = hard_fixture();
    const engine::OracleBackend oracle({}, f.truths);
    const auto registry = ops::default_registry();
    const std::vector<std::size_t> values = {1, 2, 4};
    const auto rows = sweep_kmax(f.items, oracle, registry, values, {});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].mean_steps, 1.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        EXPECT_EQ(rows[i].k_max, values[i]);
        EXPECT_LE(rows[i].mean_steps, static_cast<double>(values[i]));
        EXPECT_GE(rows[i].mean_wall_time_ms, 0.0);
    }
    EXPECT_LT(rows[0].accuracy, rows[2].accuracy);

    EXPECT_THROW((void)sweep_kmax(f.items, oracle, registry, std::vector<std::size_t>{}, {}), InvalidArgumentError);
    EXPECT_THROW((void)sweep_kmax(f.items, oracle, registry, std::vector<std::size_t>{2, 0}, {}),
                 InvalidArgumentError);
}

TEST(Breakdown, AllCleanIsOneBucket)
{
    const std::vector<EvalRecordResult> rs = {result({}, true, 1, {}), result({}, false, 3, {"denoise", "dereverb"})};
    const auto b = breakdown_by_perturbation(rs);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0].bucket, "clean");
    EXPECT_EQ(b[0].records, 2u);
    EXPECT_DOUBLE_EQ(b[0].accuracy, 0.5);
    EXPECT_EQ(b[0].steps, 4u);
    EXPECT_DOUBLE_EQ(b[0].operator_usage.at("denoise"), 0.25);
}

TEST(Breakdown, OrderAndUsage)
{
    using perturb::PerturbationKind;
    const std::vector<EvalRecordResult> rs = {
        result({}, true, 1, {}),
        result({PerturbationKind::TimeStretch}, true, 2, {"restore_tempo"}),
        result({PerturbationKind::Reverberation, PerturbationKind::AdditiveNoise}, false, 5,
               {"denoise", "dereverb", "denoise", "track_pitch"}),
        result({PerturbationKind::AdditiveNoise}, true, 3, {"denoise", "analyze_spectrum"}),
    };
    const auto b = breakdown_by_perturbation(rs);
    std::vector<std::string> names;
    for (const auto& x: b)
    {
        names.push_back(x.bucket);
        double total = 0.0;
        for (const auto& [op, u]: x.operator_usage)
            total += u;
        EXPECT_LE(total, 1.0 + 1e-12) << x.bucket;
    }
    EXPECT_EQ(names, (std::vector<std::string>{"AdditiveNoise", "Reverberation", "TimeStretch", "clean"}));
    EXPECT_EQ(b[0].records, 2u);
    EXPECT_DOUBLE_EQ(b[0].accuracy, 0.5);
    EXPECT_DOUBLE_EQ(b[0].operator_usage.at("denoise"), 3.0 / 8.0);
    EXPECT_EQ(b[1].records, 1u);
    EXPECT_TRUE(breakdown_by_perturbation(std::vector<EvalRecordResult>{}).empty());
}

TEST(Report, JsonlRoundTripAndByteIdentity)
{
    const auto dir = fresh_dir("report");
    const auto& f = hard_fixture();
    const engine::OracleBackend oracle({}, f.truths);
    const auto run = evaluate(f.items, oracle, ops::default_registry(), {});

    const std::vector<EvalSummary> sums = {run.summary};
    write_summaries(sums, dir / "s.jsonl", ReportFormat::Jsonl);
    write_results(run.results, dir / "r.jsonl", ReportFormat::Jsonl);
    const auto back_s = read_summaries(dir / "s.jsonl");
    const auto back_r = read_results(dir / "r.jsonl");
    ASSERT_EQ(back_s.size(), 1u);
    EXPECT_EQ(to_json(back_s[0]).dump(), to_json(run.summary).dump());
    ASSERT_EQ(back_r.size(), run.results.size());
    for (std::size_t i = 0; i < back_r.size(); ++i)
        EXPECT_EQ(to_json(back_r[i]).dump(), to_json(run.results[i]).dump());

    // Same inputs with different wall times give the same bytes.
    auto slow = run.results;
    for (auto& r: slow)
        r.wall_time_ms += 1000.0;
    write_results(slow, dir / "r2.jsonl", ReportFormat::Jsonl);
    write_results(slow, dir / "r2.csv", ReportFormat::Csv);
    write_results(run.results, dir / "r.csv", ReportFormat::Csv);
    EXPECT_EQ(slurp(dir / "r.jsonl"), slurp(dir / "r2.jsonl"));
    EXPECT_EQ(slurp(dir / "r.csv"), slurp(dir / "r2.csv"));

    write_timings(run.results, dir / "timings.csv");
    EXPECT_EQ(slurp(dir / "timings.csv").rfind("utterance_id,wall_time_ms\n", 0), 0u);
}

TEST(Report, CsvQuotingAndFormats)
{
    const auto dir = fresh_dir("report_csv");
    EvalSummary s;
    s.records = 2;
    s.correct = 1;
    s.overall_accuracy = 0.5;
    s.backend_id = "oracle(alpha=1.00,seed=0)";
    s.accuracy_by_kind = {{"AdditiveNoise", 1.0 / 3.0}, {"clean", 1.0}};
    const std::vector<EvalSummary> sums = {s};
    write_summaries(sums, dir / "s.csv", ReportFormat::Csv);
    const auto text = slurp(dir / "s.csv");
    EXPECT_NE(text.find("\"oracle(alpha=1.00,seed=0)\""), std::string::npos) << text;
    EXPECT_NE(text.find("AdditiveNoise=0.3333;clean=1.0"), std::string::npos) << text;
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);

    EXPECT_EQ(report_format_from_string("csv"), ReportFormat::Csv);
    EXPECT_EQ(report_format_from_string("jsonl"), ReportFormat::Jsonl);
    EXPECT_EQ(extension(ReportFormat::Jsonl), ".jsonl");
    EXPECT_THROW((void)report_format_from_string("xml"), InvalidArgumentError);
    EXPECT_THROW((void)read_results(dir / "absent.jsonl"), FileNotFoundError);
    write_text(dir / "bad.jsonl", "{\"utterance_id\": 3}\n");
    EXPECT_THROW((void)read_results(dir / "bad.jsonl"), DataError);
}

TEST(Synthetic, CorpusIsDeterministic)
{
    const auto a = fresh_dir("syn_a");
    const auto b = fresh_dir("syn_b");
    write_synthetic_corpus(a, 8, 11);
    write_synthetic_corpus(b, 8, 11);
    EXPECT_EQ(slurp(a / "labels.csv"), slurp(b / "labels.csv"));
    for (int i = 0; i < 8; ++i)
    {
        const auto name = "syn_000" + std::to_string(i) + ".wav";
        EXPECT_EQ(slurp(a / "audio" / name), slurp(b / "audio" / name)) << name;
    }
    EXPECT_NE(synthetic_utterance(Emotion::Joy, 11, 0).data(), synthetic_utterance(Emotion::Joy, 11, 1).data());
    EXPECT_DOUBLE_EQ(synthetic_utterance(Emotion::Sadness, 1, 2).duration_s(), kSyntheticSeconds);
}

} // namespace
