// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"
#include "eval_inputs.hpp"

#include "tws/bench/manifest.hpp"
#include "tws/bench/synthetic.hpp"
#include "tws/core/error.hpp"
#include "tws/core/resample.hpp"
#include "tws/core/wav_io.hpp"
#include "tws/perturb/hard_set.hpp"

#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <memory>

namespace tws::cli
{

namespace
{

struct PerturbArgs
{
    std::string in;
    std::string out;
    std::string spec;
    std::string kind;
    std::uint64_t seed = perturb::kDefaultPerturbationSeed;
};

nlohmann::json parse_spec_arg(const std::string& s)
{
    std::string text = s;
    if (!s.empty() && s.front() == '@')
    {
        std::ifstream in(s.substr(1), std::ios::binary);
        if (!in)
            throw FileNotFoundError(s.substr(1));
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try
    {
        return nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw InvalidArgumentError(std::string("--spec is not JSON: ") + e.what());
    }
}

void run_perturb(const PerturbArgs& a)
{
    if (a.spec.empty() == a.kind.empty())
        throw InvalidArgumentError("give exactly one of --spec or --kind");
    perturb::PerturbationSpec spec;
    if (!a.spec.empty())
    {
        try
        {
            spec = perturb::spec_from_json(parse_spec_arg(a.spec));
        }
        catch (const DataError& e)
        {
            throw InvalidArgumentError(e.what());
        }
    }
    else
    {
        spec = perturb::sample_spec(perturb::kind_from_string(a.kind), {a.seed});
    }
    perturb::validate(spec);
    const auto x = to_canonical_rate(load_wav(a.in));
    const auto y = perturb::apply_spec(x, spec);
    store_wav(y.audio, a.out);
    std::cout << perturb::to_json(spec).dump() << '\n';
}

struct BuildArgs
{
    std::string sources;
    std::string audio_dir;
    std::string labels;
    std::string out;
    std::uint64_t seed = perturb::kDefaultPerturbationSeed;
    double p = perturb::kDefaultApplyProbability;
    std::vector<double> kind_p;
    std::size_t parallelism = 1;
};

void run_build_hard(const BuildArgs& a)
{
    if (a.sources.empty() == a.audio_dir.empty())
        throw InvalidArgumentError("give exactly one of --sources or --audio-dir");
    if (a.audio_dir.empty() != a.labels.empty())
        throw InvalidArgumentError("--audio-dir and --labels go together");
    const auto sources = a.sources.empty() ? bench::build_manifest(a.audio_dir, a.labels)
                                           : perturb::read_source_manifest(a.sources);
    perturb::HardSetOptions options;
    options.master_seed = a.seed;
    options.p_apply = a.p;
    options.parallelism = a.parallelism;
    if (!a.kind_p.empty())
    {
        if (a.kind_p.size() != 4)
            throw InvalidArgumentError("--kind-p takes four probabilities (AN,RE,PS,TS)");
        options.kind_probabilities = std::array<double, 4>{a.kind_p[0], a.kind_p[1], a.kind_p[2], a.kind_p[3]};
    }
    const auto dir = output_dir(a.out);
    const auto manifest = perturb::build_hard_set(sources, dir, options);
    perturb::write_hard_set_manifest(manifest, dir / "manifest.jsonl");

    std::size_t clean = 0;
    std::array<std::size_t, 4> per_kind{};
    for (const auto& r: manifest.records)
    {
        clean += r.applied_specs.empty() ? 1 : 0;
        for (const auto& s: r.applied_specs)
            ++per_kind[perturb::kind_index(s.kind)];
    }
    std::cout << fmt::format("{} records ({} clean) -> {}\n", manifest.records.size(), clean,
                             (dir / "manifest.jsonl").string());
    for (auto k: perturb::kAllKinds)
        std::cout << fmt::format("  {}: {}\n", perturb::to_string(k), per_kind[perturb::kind_index(k)]);
}

struct SynthArgs
{
    std::string out;
    std::size_t count = 200;
    std::uint64_t seed = 7;
};

void run_synth(const SynthArgs& a)
{
    const auto dir = output_dir(a.out);
    const auto records = bench::write_synthetic_corpus(dir, a.count, a.seed);
    perturb::write_source_manifest(records, dir / "sources.jsonl");
    std::cout << fmt::format("{} clips -> {}\n", records.size(), (dir / "sources.jsonl").string());
}

} // namespace

void add_data_commands(CLI::App& app)
{
    {
        auto a = std::make_shared<PerturbArgs>();
        auto* cmd = app.add_subcommand("perturb", "Apply one perturbation to one file");
        cmd->add_option("--in", a->in, "Input WAV")->required();
        cmd->add_option("--out", a->out, "Output WAV")->required();
        cmd->add_option("--spec", a->spec, "Spec as JSON, or @file")->group("Spec");
        cmd->add_option("--kind", a->kind, "Draw parameters for this kind (AN, RE, PS, TS)")->group("Spec");
        cmd->add_option("--seed", a->seed, "Seed for --kind")->capture_default_str()->group("Spec");
        cmd->callback([a] { run_perturb(*a); });
    }
    {
        auto a = std::make_shared<BuildArgs>();
        auto* cmd = app.add_subcommand("build-hard", "Build a perturbed hard set and its manifest");
        cmd->add_option("--sources", a->sources, "Source manifest (JSONL)");
        cmd->add_option("--audio-dir", a->audio_dir, "Directory of <utterance_id>.wav files");
        cmd->add_option("--labels", a->labels, "CSV utterance_id,label for --audio-dir");
        cmd->add_option("--out", a->out, "Output directory (WAVs and manifest.jsonl)")->required();
        cmd->add_option("--seed", a->seed, "Master seed")->capture_default_str();
        cmd->add_option("--p", a->p, "Per-kind apply probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
        cmd->add_option("--kind-p", a->kind_p, "Per-kind probabilities AN,RE,PS,TS (overrides --p)")
            ->delimiter(',')
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--parallelism", a->parallelism, "Worker threads")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->callback([a] { run_build_hard(*a); });
    }
    {
        auto a = std::make_shared<SynthArgs>();
        auto* cmd = app.add_subcommand("synth-corpus", "Write a labelled synthetic speech-like corpus");
        cmd->add_option("--out", a->out, "Output directory")->required();
        cmd->add_option("--count", a->count, "Number of clips")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--seed", a->seed, "Seed")->capture_default_str();
        cmd->callback([a] { run_synth(*a); });
    }
}

} // namespace tws::cli
