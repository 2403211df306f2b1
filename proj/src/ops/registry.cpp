// SPDX-License-Identifier: Apache-2.0
#include "tws/ops/registry.hpp"

#include "tws/ops/enhance.hpp"
#include "tws/ops/separation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace tws::ops
{

namespace
{

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

ToolOutput audio_output(Waveform w, bool fallback = false)
{
    ToolOutput out;
    out.text = render_audio_update(w);
    out.audio = std::move(w);
    out.used_fallback = fallback;
    return out;
}

} // namespace

UnknownOperatorError::UnknownOperatorError(std::string_view name)
    : InvalidArgumentError("unknown operator: " + std::string(name))
{
}

std::string_view to_string(OperatorCategory c) noexcept
{
    switch (c)
    {
        case OperatorCategory::Denoise: return "denoise";
        case OperatorCategory::Enhance: return "enhance";
        case OperatorCategory::Normalize: return "normalize";
        case OperatorCategory::Analyze: return "analyze";
    }
    return "enhance";
}

std::string_view to_string(OperatorGroup g) noexcept
{
    switch (g)
    {
        case OperatorGroup::Enhancement: return "enhancement";
        case OperatorGroup::Analysis: return "analysis";
        case OperatorGroup::Transformation: return "transformation";
        case OperatorGroup::Separation: return "separation";
    }
    return "enhancement";
}

OperatorCategory category_from_string(std::string_view s)
{
    const auto l = lower(s);
    for (auto c: {OperatorCategory::Denoise, OperatorCategory::Enhance, OperatorCategory::Normalize,
                  OperatorCategory::Analyze})
        if (l == to_string(c))
            return c;
    throw InvalidArgumentError("unknown operator category: " + std::string(s));
}

bool is_valid_identifier(std::string_view s) noexcept
{
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front())))
        return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

bool ParamSpec::accepts(double v) const noexcept
{
    if (!std::isfinite(v) || v < min || v > max)
        return false;
    if (type == ParamType::Integer || type == ParamType::Boolean)
        return v == std::floor(v);
    return true;
}

double ParamSpec::parse(std::string_view text) const
{
    double v = 0.0;
    const auto l = lower(text);
    if (type == ParamType::Boolean && (l == "true" || l == "false"))
        v = l == "true" ? 1.0 : 0.0;
    else
    {
        const char* begin = text.data();
        const char* end = text.data() + text.size();
        if (begin != end && *begin == '+')
            ++begin;
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr != end)
            throw InvalidOperatorArgsError(fmt::format("parameter {}: '{}' is not a number", name, text));
    }
    if (!accepts(v))
        throw InvalidOperatorArgsError(fmt::format("parameter {}: {} outside [{}, {}]", name, text, min, max));
    return v;
}

std::string ParamSpec::render_default() const
{
    if (type == ParamType::Boolean)
        return default_value != 0.0 ? "true" : "false";
    if (type == ParamType::Integer)
        return fmt::format("{}", static_cast<long long>(default_value));
    return fmt::format("{}", default_value);
}

std::string OperatorDescriptor::signature() const
{
    std::string args;
    for (const auto& p: params)
    {
        if (!args.empty())
            args += ", ";
        args += fmt::format("{}={}", p.name, p.render_default());
    }
    return fmt::format("{}({}): {}", name, args, summary);
}

void OperatorRegistry::add(OperatorDescriptor descriptor, OperatorFn fn)
{
    if (!is_valid_identifier(descriptor.name))
        throw InvalidArgumentError("operator name is not an identifier: " + descriptor.name);
    if (find(descriptor.name))
        throw InvalidArgumentError("duplicate operator: " + descriptor.name);
    for (const auto& p: descriptor.params)
    {
        if (!is_valid_identifier(p.name))
            throw InvalidArgumentError("parameter name is not an identifier: " + p.name);
        if (!p.accepts(p.default_value))
            throw InvalidArgumentError("default outside range for " + descriptor.name + "." + p.name);
    }
    _entries.push_back({std::move(descriptor), std::move(fn)});
}

const OperatorEntry* OperatorRegistry::find(std::string_view name) const noexcept
{
    const auto l = lower(name);
    for (const auto& e: _entries)
        if (lower(e.descriptor.name) == l)
            return &e;
    return nullptr;
}

const OperatorEntry& OperatorRegistry::at(std::string_view name) const
{
    if (const auto* e = find(name))
        return *e;
    throw UnknownOperatorError(name);
}

std::vector<std::string> OperatorRegistry::names() const
{
    std::vector<std::string> out;
    for (const auto& e: _entries)
        out.push_back(e.descriptor.name);
    return out;
}

OperatorRegistry OperatorRegistry::without(std::span<const OperatorCategory> excluded) const
{
    OperatorRegistry out;
    for (const auto& e: _entries)
        if (std::find(excluded.begin(), excluded.end(), e.descriptor.category) == excluded.end())
            out._entries.push_back(e);
    return out;
}

ArgValues OperatorRegistry::resolve(const OperatorDescriptor& d, const RawArgs& raw) const
{
    ArgValues out;
    for (const auto& [key, value]: raw)
    {
        const auto it = std::find_if(d.params.begin(), d.params.end(),
                                     [&](const ParamSpec& p) { return lower(p.name) == lower(key); });
        if (it == d.params.end())
            throw InvalidOperatorArgsError(fmt::format("{} has no parameter '{}'", d.name, key));
        if (out.count(it->name))
            throw InvalidOperatorArgsError(fmt::format("parameter '{}' given twice", it->name));
        out[it->name] = it->parse(value);
    }
    for (const auto& p: d.params)
        out.try_emplace(p.name, p.default_value);
    return out;
}

ToolOutput OperatorRegistry::invoke(std::string_view name, const Waveform& x, const RawArgs& raw) const
{
    const auto& e = at(name);
    return e.fn(x, resolve(e.descriptor, raw));
}

ToolOutput OperatorRegistry::invoke(std::string_view name, const Waveform& x, const ArgValues& args) const
{
    const auto& e = at(name);
    ArgValues full;
    for (const auto& p: e.descriptor.params)
    {
        const auto it = args.find(p.name);
        const double v = it == args.end() ? p.default_value : it->second;
        if (!p.accepts(v))
            throw InvalidOperatorArgsError(fmt::format("parameter {} out of range: {}", p.name, v));
        full[p.name] = v;
    }
    return e.fn(x, full);
}

OperatorRegistry default_registry()
{
    OperatorRegistry r;
    r.add({"denoise",
           "Spectral subtraction of the stationary noise floor.",
           {{"over_subtraction", ParamType::Real, kMinOverSubtraction, kMaxOverSubtraction, kDefaultOverSubtraction,
             "noise profile multiplier"}},
           OutputKind::Audio, OperatorCategory::Denoise, OperatorGroup::Enhancement},
          [](const Waveform& x, const ArgValues& a) { return audio_output(denoise(x, a.at("over_subtraction"))); });
    r.add({"dereverb", "Suppresses late reverberation and echo tails.", {}, OutputKind::Audio,
           OperatorCategory::Enhance, OperatorGroup::Enhancement},
          [](const Waveform& x, const ArgValues&) { return audio_output(dereverb(x)); });
    r.add({"normalize_loudness",
           "Scales the signal to a target RMS level.",
           {{"target_dbfs", ParamType::Real, -60.0, 0.0, kDefaultLoudnessDbfs, "target RMS level in dBFS"}},
           OutputKind::Audio, OperatorCategory::Normalize, OperatorGroup::Transformation},
          [](const Waveform& x, const ArgValues& a) {
              return audio_output(normalize_loudness(x, a.at("target_dbfs")));
          });
    r.add({"analyze_spectrum",
           "Reports estimated SNR, spectral shape, level, pitch and duration.",
           {},
           OutputKind::Report, OperatorCategory::Analyze, OperatorGroup::Analysis},
          [](const Waveform& x, const ArgValues&) {
              ToolOutput out;
              out.report = analyze_spectrum(x);
              out.text = render(*out.report);
              return out;
          });
    r.add({"track_pitch", "Reports the fundamental frequency contour summary.", {}, OutputKind::Report,
           OperatorCategory::Analyze, OperatorGroup::Analysis},
          [](const Waveform& x, const ArgValues&) {
              ToolOutput out;
              out.contour = track_pitch(x);
              out.text = render(*out.contour);
              return out;
          });
    r.add({"correct_pitch",
           "Shifts pitch by the given semitones, keeping formants.",
           {{"semitones", ParamType::Real, -12.0, 12.0, 0.0, "shift in semitones"}},
           OutputKind::Audio, OperatorCategory::Enhance, OperatorGroup::Transformation},
          [](const Waveform& x, const ArgValues& a) {
              auto res = correct_pitch(x, a.at("semitones"));
              return audio_output(std::move(res.audio), res.used_fallback);
          });
    r.add({"restore_tempo",
           "Undoes a tempo change; factor is the speed-up that was applied.",
           {{"factor", ParamType::Real, 0.25, 4.0, 1.0, "detected speed-up factor"}},
           OutputKind::Audio, OperatorCategory::Enhance, OperatorGroup::Transformation},
          [](const Waveform& x, const ArgValues& a) { return audio_output(restore_tempo(x, a.at("factor"))); });
    r.add({"extract_voice", "Keeps the harmonic (voiced) component and drops transients.", {}, OutputKind::Audio,
           OperatorCategory::Enhance, OperatorGroup::Separation},
          [](const Waveform& x, const ArgValues&) { return audio_output(extract_voice(x)); });
    return r;
}

OperatorEntry identity_operator()
{
    return {{"identity", "Returns the audio unchanged.", {}, OutputKind::Audio, OperatorCategory::Enhance,
             OperatorGroup::Transformation},
            [](const Waveform& x, const ArgValues&) { return audio_output(x); }};
}

} // namespace tws::ops
