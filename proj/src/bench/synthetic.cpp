// SPDX-License-Identifier: Apache-2.0
#include "tws/bench/synthetic.hpp"

#include "tws/core/error.hpp"
#include "tws/core/rng.hpp"
#include "tws/core/synth.hpp"
#include "tws/core/wav_io.hpp"

#include <fmt/format.h>

#include <fstream>

namespace tws::bench
{

namespace
{

/// f0 range and syllable/gap durations per label (anger .. surprise).
struct Profile
{
    double f0_lo, f0_hi;
    double syl_min, syl_max;
    double gap_min, gap_max;
};

constexpr std::array<Profile, engine::kEmotionCount> kProfiles = {{
    {170.0, 230.0, 0.14, 0.22, 0.08, 0.14}, // anger: high, fast
    {110.0, 150.0, 0.22, 0.32, 0.14, 0.22}, // disgust
    {200.0, 260.0, 0.12, 0.20, 0.10, 0.18}, // fear
    {180.0, 240.0, 0.16, 0.24, 0.10, 0.16}, // joy
    {120.0, 160.0, 0.18, 0.30, 0.12, 0.20}, // neutral
    {95.0, 130.0, 0.26, 0.38, 0.18, 0.28},  // sadness: low, slow
    {210.0, 280.0, 0.15, 0.25, 0.12, 0.20}, // surprise
}};

} // namespace

Waveform synthetic_utterance(engine::Emotion label, std::uint64_t seed, std::size_t index)
{
    const auto& p = kProfiles[engine::emotion_index(label)];
    Rng rng = Rng::substream({seed, static_cast<std::uint64_t>(index)});
    synth::SpeechLikeOptions o;
    o.f0_hz = rng.uniform(p.f0_lo, p.f0_hi);
    o.duration_s = kSyntheticSeconds;
    o.syllable_min_s = p.syl_min;
    o.syllable_max_s = p.syl_max;
    o.gap_min_s = p.gap_min;
    o.gap_max_s = p.gap_max;
    return synth::speech_like(o, rng);
}

std::vector<perturb::SourceRecord> write_synthetic_corpus(const std::filesystem::path& dir, std::size_t count,
                                                          std::uint64_t seed)
{
    if (count == 0)
        throw InvalidArgumentError("synthetic corpus needs at least one clip");
    const auto audio_dir = dir / "audio";
    std::error_code ec;
    std::filesystem::create_directories(audio_dir, ec);
    if (ec)
        throw WriteError("cannot create " + audio_dir.string() + ": " + ec.message());
    std::ofstream labels(dir / "labels.csv", std::ios::binary | std::ios::trunc);
    if (!labels)
        throw WriteError("cannot write " + (dir / "labels.csv").string());
    labels << "utterance_id,label\n";

    std::vector<perturb::SourceRecord> out;
    for (std::size_t i = 0; i < count; ++i)
    {
        const auto label = engine::emotion_at(i % engine::kEmotionCount);
        const std::string id = fmt::format("syn_{:04d}", i);
        const auto path = audio_dir / (id + ".wav");
        store_wav(synthetic_utterance(label, seed, i), path);
        labels << id << ',' << engine::to_string(label) << '\n';
        out.push_back({id, path.string(), std::string(engine::to_string(label))});
    }
    if (!labels)
        throw WriteError("failed writing " + (dir / "labels.csv").string());
    return out;
}

TruthTable oracle_truths(const perturb::HardSetManifest& manifest)
{
    TruthTable out;
    for (const auto& r: manifest.records)
    {
        const auto label = engine::emotion_from_string(r.label);
        if (!label)
            throw DataError(fmt::format("record '{}': unknown label '{}'", r.utterance_id, r.label));
        out.emplace(r.utterance_id, engine::make_truth(*label, load_wav(r.source_path), r.applied_specs));
    }
    return out;
}

TruthTable oracle_truths(std::span<const perturb::SourceRecord> sources)
{
    TruthTable out;
    for (const auto& r: sources)
    {
        const auto label = engine::emotion_from_string(r.label);
        if (!label)
            throw DataError(fmt::format("record '{}': unknown label '{}'", r.utterance_id, r.label));
        out.emplace(r.utterance_id, engine::make_truth(*label, load_wav(r.source_path)));
    }
    return out;
}

} // namespace tws::bench
