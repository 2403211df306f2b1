// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"
#include "eval_inputs.hpp"

#include "tws/bench/protocols.hpp"
#include "tws/bench/report.hpp"
#include "tws/core/error.hpp"
#include "tws/ops/registry.hpp"

#include <fmt/format.h>

#include <iostream>
#include <memory>

namespace tws::cli
{

namespace
{

namespace fs = std::filesystem;

std::string file_name(std::string_view stem, bench::ReportFormat f)
{
    return std::string(stem) + std::string(bench::extension(f));
}

// JSONL always; CSV on request.
std::vector<bench::ReportFormat> formats_of(const std::string& format)
{
    std::vector<bench::ReportFormat> out = {bench::ReportFormat::Jsonl};
    if (bench::report_format_from_string(format) == bench::ReportFormat::Csv)
        out.push_back(bench::ReportFormat::Csv);
    return out;
}

void print_summary(const bench::EvalSummary& s)
{
    std::cout << fmt::format("mode={} records={} accuracy={:.4f} mean_steps={:.4f} backend_errors={}\n",
                             engine::to_string(s.mode), s.records, s.overall_accuracy, s.mean_steps,
                             s.backend_errors);
    for (const auto& [kind, acc]: s.accuracy_by_kind)
        std::cout << fmt::format("  {:<14} {:.4f}\n", kind, acc);
}

void run_eval(const EvalArgs& a, int& exit_code)
{
    const auto corpus = load_corpus(a);
    const auto backend = make_backend(a, corpus);
    const auto run = bench::evaluate(corpus.items, *backend, ops::default_registry(), make_config(a));
    const auto dir = output_dir(a.out);
    const std::vector<bench::EvalSummary> summaries = {run.summary};
    const auto buckets = bench::breakdown_by_perturbation(run.results);
    for (auto f: formats_of(a.format))
    {
        bench::write_summaries(summaries, dir / file_name("summary", f), f);
        bench::write_results(run.results, dir / file_name("results", f), f);
        bench::write_breakdown(buckets, dir / file_name("breakdown", f), f);
    }
    bench::write_timings(run.results, dir / "timings.csv");
    print_summary(run.summary);
    if (run.summary.backend_errors > 0)
        exit_code = std::max(exit_code, kExitBackend);
}

void run_ablate(const EvalArgs& a, int& exit_code)
{
    const auto corpus = load_corpus(a);
    const auto backend = make_backend(a, corpus);
    const auto rows = bench::ablate_operators(corpus.items, *backend, ops::default_registry(), make_config(a));
    const auto dir = output_dir(a.out);
    for (auto f: formats_of(a.format))
        bench::write_ablation(rows, dir / file_name("ablation", f), f);
    for (const auto& r: rows)
    {
        std::cout << fmt::format("{:<14} {:.4f} {:+.4f}\n", r.name, r.summary.overall_accuracy, r.delta);
        if (r.summary.backend_errors > 0)
            exit_code = std::max(exit_code, kExitBackend);
    }
}

struct SweepArgs
{
    EvalArgs eval;
    std::vector<std::size_t> values = {1, 2, 3, 5, 8};
};

void run_sweep(const SweepArgs& a)
{
    const auto corpus = load_corpus(a.eval);
    const auto backend = make_backend(a.eval, corpus);
    const auto rows =
        bench::sweep_kmax(corpus.items, *backend, ops::default_registry(), a.values, make_config(a.eval));
    const auto dir = output_dir(a.eval.out);
    for (auto f: formats_of(a.eval.format))
        bench::write_sweep(rows, dir / file_name("sweep", f), f);
    for (const auto& r: rows)
        std::cout << fmt::format("k_max={:<3} accuracy={:.4f} mean_steps={:.4f}\n", r.k_max, r.accuracy,
                                 r.mean_steps);
}

struct ReportArgs
{
    std::vector<std::string> inputs;
    std::string out;
    std::string format = "csv";
};

// Rebuilds summaries and breakdowns from eval output directories.
void run_report(const ReportArgs& a)
{
    const auto f = bench::report_format_from_string(a.format);
    const auto dir = output_dir(a.out);
    std::vector<bench::EvalSummary> summaries;
    for (const auto& in: a.inputs)
    {
        const fs::path src(in);
        const auto stored = bench::read_summaries(src / "summary.jsonl");
        if (stored.size() != 1)
            throw DataError((src / "summary.jsonl").string() + " must hold exactly one summary");
        const auto results = bench::read_results(src / "results.jsonl");
        const auto& s = stored.front();
        const auto again = bench::summarize(results, s.mode, s.k_max, s.backend_id, s.exclusions);
        if (bench::to_json(again).dump() != bench::to_json(s).dump())
            throw DataError("summary in " + src.string() + " does not match its results");
        summaries.push_back(s);

        auto name = src.lexically_normal().filename().string();
        if (name.empty())
            name = src.lexically_normal().parent_path().filename().string();
        bench::write_breakdown(bench::breakdown_by_perturbation(results), dir / file_name(name + "_breakdown", f), f);
        std::cout << fmt::format("{:<20} mode={} accuracy={:.4f} mean_steps={:.4f}\n", name,
                                 engine::to_string(s.mode), s.overall_accuracy, s.mean_steps);
    }
    bench::write_summaries(summaries, dir / file_name("summaries", f), f);
}

} // namespace

void add_eval_commands(CLI::App& app, int& exit_code)
{
    {
        auto a = std::make_shared<EvalArgs>();
        auto* cmd = app.add_subcommand("eval", "Evaluate a corpus in baseline or TwS mode");
        add_eval_options(cmd, *a, true);
        cmd->callback([a, &exit_code] { run_eval(*a, exit_code); });
    }
    {
        auto a = std::make_shared<EvalArgs>();
        auto* cmd = app.add_subcommand("ablate", "Leave-one-category-out operator ablation");
        add_eval_options(cmd, *a, false);
        cmd->callback([a, &exit_code] { run_ablate(*a, exit_code); });
    }
    {
        auto a = std::make_shared<SweepArgs>();
        auto* cmd = app.add_subcommand("sweep-steps", "Accuracy and steps used across k_max values");
        add_eval_options(cmd, a->eval, false);
        cmd->add_option("--values", a->values, "k_max values")
            ->delimiter(',')
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->callback([a] { run_sweep(*a); });
    }
    {
        auto a = std::make_shared<ReportArgs>();
        auto* cmd = app.add_subcommand("report", "Summaries and per-perturbation breakdowns from eval outputs");
        cmd->add_option("--in", a->inputs, "Eval output directory (repeatable)")->required();
        cmd->add_option("--out", a->out, "Output directory")->required();
        cmd->add_option("--format", a->format, "Report format")
            ->check(CLI::IsMember({"csv", "jsonl"}))
            ->capture_default_str();
        cmd->callback([a] { run_report(*a); });
    }
}

} // namespace tws::cli
