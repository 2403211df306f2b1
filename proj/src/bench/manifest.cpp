// SPDX-License-Identifier: Apache-2.0
#include "tws/bench/manifest.hpp"

#include "tws/core/error.hpp"
#include "tws/core/wav_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <set>

namespace tws::bench
{

namespace
{

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;)
    {
        const auto comma = line.find(',', start);
        out.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

engine::Emotion parse_label(std::string_view label, std::string_view id)
{
    const auto e = engine::emotion_from_string(label);
    if (!e)
        throw DataError(fmt::format("record '{}': unknown label '{}'", id, label));
    return *e;
}

} // namespace

std::vector<perturb::SourceRecord> build_manifest(const std::filesystem::path& audio_dir,
                                                  const std::filesystem::path& labels_file)
{
    std::ifstream in(labels_file);
    if (!in)
        throw FileNotFoundError(labels_file.string());
    std::string line;
    if (!std::getline(in, line) || split_row(line) != std::vector<std::string>{"utterance_id", "label"})
        throw DataError(labels_file.string() + ": header must be utterance_id,label");

    std::vector<perturb::SourceRecord> out;
    std::set<std::string, std::less<>> seen;
    for (std::size_t row = 2; std::getline(in, line); ++row)
    {
        if (trim(line).empty())
            continue;
        const auto cells = split_row(line);
        if (cells.size() != 2 || cells[0].empty())
            throw DataError(fmt::format("{} row {}: expected utterance_id,label", labels_file.string(), row));
        const auto& id = cells[0];
        const auto label = engine::emotion_from_string(cells[1]);
        if (!label)
            throw DataError(
                fmt::format("{} row {}: unknown label '{}' for '{}'", labels_file.string(), row, cells[1], id));
        if (!seen.insert(id).second)
            throw DataError(fmt::format("{} row {}: duplicate utterance_id '{}'", labels_file.string(), row, id));
        const auto audio = audio_dir / (id + ".wav");
        if (!std::filesystem::is_regular_file(audio))
            throw DataError(fmt::format("{} row {}: missing audio {}", labels_file.string(), row, audio.string()));
        out.push_back({id, audio.string(), std::string(engine::to_string(*label))});
    }
    return out;
}

std::vector<EvalItem> load_eval_items(const perturb::HardSetManifest& manifest)
{
    std::vector<EvalItem> out;
    out.reserve(manifest.records.size());
    for (const auto& r: manifest.records)
    {
        EvalItem item{r.utterance_id, parse_label(r.label, r.utterance_id), load_wav(r.output_path), {}};
        for (const auto& s: r.applied_specs)
            item.kinds.push_back(s.kind);
        out.push_back(std::move(item));
    }
    return out;
}

std::vector<EvalItem> load_eval_items(std::span<const perturb::SourceRecord> sources)
{
    std::vector<EvalItem> out;
    out.reserve(sources.size());
    for (const auto& r: sources)
        out.push_back({r.utterance_id, parse_label(r.label, r.utterance_id), load_wav(r.source_path), {}});
    return out;
}

} // namespace tws::bench
