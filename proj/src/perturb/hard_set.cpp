// SPDX-License-Identifier: Apache-2.0
#include "tws/perturb/hard_set.hpp"

#include "tws/core/error.hpp"
#include "tws/core/resample.hpp"
#include "tws/core/wav_io.hpp"
#include "tws/perturb/noise.hpp"
#include "tws/perturb/pitch_shift.hpp"
#include "tws/perturb/reverb.hpp"
#include "tws/perturb/time_stretch.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

namespace tws::perturb
{

namespace
{

std::filesystem::path base_of(const std::filesystem::path& manifest)
{
    return std::filesystem::absolute(manifest).lexically_normal().parent_path();
}

// Paths under the manifest's directory are stored relative to it.
std::string stored_path(const std::string& p, const std::filesystem::path& base)
{
    if (p.empty())
        return p;
    const auto rel = std::filesystem::absolute(p).lexically_normal().lexically_relative(base);
    if (rel.empty() || *rel.begin() == "..")
        return p;
    return rel.generic_string();
}

std::string loaded_path(const std::string& p, const std::filesystem::path& base)
{
    if (p.empty() || std::filesystem::path(p).is_absolute())
        return p;
    return (base / p).lexically_normal().string();
}

} // namespace

AppliedAudio apply_spec(const Waveform& x, const PerturbationSpec& spec)
{
    Rng rng = realization_stream(spec.seed_path);
    return std::visit(
        [&](const auto& p) -> AppliedAudio {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AdditiveNoiseParams>)
                return {add_noise_at_snr(x, p, rng), false};
            else if constexpr (std::is_same_v<T, ReverbParams>)
                return {apply_reverb(x, synth_room_ir(p.rt60_ms, p.room_size_m3, rng, x.sample_rate())), false};
            else if constexpr (std::is_same_v<T, PitchShiftParams>)
            {
                auto r = pitch_shift(x, p.semitones, p.formant_preservation);
                return {std::move(r.audio), r.used_fallback};
            }
            else
                return {time_stretch(x, p.stretch_factor, p.quality_mode), false};
        },
        spec.params);
}

AppliedAudio apply_specs(const Waveform& x, std::span<const PerturbationSpec> specs)
{
    AppliedAudio out{x, false};
    for (const auto& spec: specs)
    {
        auto step = apply_spec(out.audio, spec);
        out.audio = std::move(step.audio);
        out.pitch_fallback = out.pitch_fallback || step.pitch_fallback;
    }
    return out;
}

KindSelection select_kinds(std::uint64_t master_seed, std::string_view utterance_id,
                           const std::array<double, 4>& probabilities)
{
    KindSelection sel;
    std::array<Rng, 4> streams{
        Rng::substream({master_seed, stable_hash32(utterance_id), 0, 2}),
        Rng::substream({master_seed, stable_hash32(utterance_id), 1, 2}),
        Rng::substream({master_seed, stable_hash32(utterance_id), 2, 2}),
        Rng::substream({master_seed, stable_hash32(utterance_id), 3, 2}),
    };
    for (auto kind: kAllKinds)
        if (streams[kind_index(kind)].bernoulli(probabilities[kind_index(kind)]))
            sel.first_roll.push_back(kind);
    sel.kinds = sel.first_roll;
    if (sel.kinds.empty())
    {
        sel.rerolled = true;
        for (auto kind: kAllKinds)
            if (streams[kind_index(kind)].bernoulli(probabilities[kind_index(kind)]))
                sel.kinds.push_back(kind);
    }
    return sel;
}

namespace
{

std::array<double, 4> probabilities_of(const HardSetOptions& options)
{
    if (options.kind_probabilities)
        return *options.kind_probabilities;
    return {options.p_apply, options.p_apply, options.p_apply, options.p_apply};
}

std::optional<HardSetRecord> build_one(const SourceRecord& src, const std::filesystem::path& output_dir,
                                       const HardSetOptions& options)
{
    HardSetRecord rec;
    rec.utterance_id = src.utterance_id;
    rec.source_path = src.source_path;
    rec.label = src.label;
    rec.output_path = (output_dir / (src.utterance_id + ".wav")).string();

    Waveform audio;
    try
    {
        audio = to_canonical_rate(load_wav(src.source_path));
    }
    catch (const DataError& e)
    {
        spdlog::warn("skipping {}: {}", src.utterance_id, e.what());
        return std::nullopt;
    }

    const auto sel = select_kinds(options.master_seed, src.utterance_id, probabilities_of(options));
    for (auto kind: sel.kinds)
        rec.applied_specs.push_back(sample_spec(kind, spec_seed_path(options.master_seed, src.utterance_id, kind)));
    rec.clean_passthrough = rec.applied_specs.empty();

    if (!rec.applied_specs.empty())
    {
        try
        {
            auto applied = apply_specs(audio, rec.applied_specs);
            audio = std::move(applied.audio);
            rec.pitch_fallback = applied.pitch_fallback;
        }
        catch (const InvalidArgumentError& e)
        {
            spdlog::warn("skipping {}: perturbation failed: {}", src.utterance_id, e.what());
            return std::nullopt;
        }
    }
    store_wav(audio, rec.output_path);
    return rec;
}

} // namespace

HardSetManifest build_hard_set(std::span<const SourceRecord> sources, const std::filesystem::path& output_dir,
                               const HardSetOptions& options)
{
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec || !std::filesystem::is_directory(output_dir))
        throw WriteError("cannot create output directory " + output_dir.string());
    const auto probe = output_dir / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out)
            throw WriteError("output directory not writable: " + output_dir.string());
    }
    std::filesystem::remove(probe, ec);

    std::vector<std::optional<HardSetRecord>> built(sources.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < sources.size(); i = next++)
        {
            try
            {
                built[i] = build_one(sources[i], output_dir, options);
            }
            catch (...)
            {
                const std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(options.parallelism, 1, std::max<std::size_t>(1, sources.size()));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);

    HardSetManifest manifest;
    manifest.master_seed = options.master_seed;
    for (auto& r: built)
        if (r)
            manifest.records.push_back(std::move(*r));
    return manifest;
}

std::vector<SourceRecord> read_source_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw FileNotFoundError(path.string());
    const auto base = base_of(path);
    std::vector<SourceRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try
        {
            const auto j = nlohmann::json::parse(line);
            out.push_back({j.at("utterance_id").get<std::string>(),
                           loaded_path(j.at("source_path").get<std::string>(), base),
                           j.at("label").get<std::string>()});
        }
        catch (const nlohmann::json::exception& e)
        {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_source_manifest(std::span<const SourceRecord> records, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw WriteError("cannot write " + path.string());
    const auto base = base_of(path);
    for (const auto& r: records)
    {
        nlohmann::ordered_json j;
        j["utterance_id"] = r.utterance_id;
        j["source_path"] = stored_path(r.source_path, base);
        j["label"] = r.label;
        out << j.dump() << '\n';
    }
}

nlohmann::ordered_json to_json(const HardSetRecord& r)
{
    nlohmann::ordered_json j;
    j["utterance_id"] = r.utterance_id;
    j["source_path"] = r.source_path;
    j["output_path"] = r.output_path;
    j["label"] = r.label;
    j["applied_specs"] = nlohmann::ordered_json::array();
    for (const auto& s: r.applied_specs)
        j["applied_specs"].push_back(to_json(s));
    j["clean_passthrough"] = r.clean_passthrough;
    j["pitch_fallback"] = r.pitch_fallback;
    return j;
}

HardSetRecord hard_set_record_from_json(const nlohmann::json& j)
{
    try
    {
        HardSetRecord r;
        r.utterance_id = j.at("utterance_id").get<std::string>();
        r.source_path = j.value("source_path", std::string());
        r.output_path = j.value("output_path", r.source_path);
        r.label = j.at("label").get<std::string>();
        if (j.contains("applied_specs"))
            for (const auto& s: j.at("applied_specs"))
                r.applied_specs.push_back(spec_from_json(s));
        r.clean_passthrough = j.value("clean_passthrough", r.applied_specs.empty());
        r.pitch_fallback = j.value("pitch_fallback", false);
        return r;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw DataError(std::string("malformed manifest record: ") + e.what());
    }
}

void write_hard_set_manifest(const HardSetManifest& manifest, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw WriteError("cannot write " + path.string());
    const auto base = base_of(path);
    for (auto r: manifest.records)
    {
        r.source_path = stored_path(r.source_path, base);
        r.output_path = stored_path(r.output_path, base);
        out << to_json(r).dump() << '\n';
    }
}

HardSetManifest read_hard_set_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw FileNotFoundError(path.string());
    const auto base = base_of(path);
    HardSetManifest m;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try
        {
            auto r = hard_set_record_from_json(nlohmann::json::parse(line));
            r.source_path = loaded_path(r.source_path, base);
            r.output_path = loaded_path(r.output_path, base);
            m.records.push_back(std::move(r));
        }
        catch (const nlohmann::json::parse_error& e)
        {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!m.records.empty() && !m.records.front().applied_specs.empty()
        && !m.records.front().applied_specs.front().seed_path.empty())
        m.master_seed = m.records.front().applied_specs.front().seed_path.front();
    return m;
}

} // namespace tws::perturb
