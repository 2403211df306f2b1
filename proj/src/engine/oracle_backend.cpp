// SPDX-License-Identifier: Apache-2.0
#include "tws/engine/oracle_backend.hpp"

#include "tws/core/pitch.hpp"
#include "tws/core/rng.hpp"
#include "tws/engine/prompt.hpp"
#include "tws/perturb/reverb.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace tws::engine
{

namespace
{

constexpr std::string_view kDenoise = "denoise";
constexpr std::string_view kCorrectPitch = "correct_pitch";
constexpr std::string_view kRestoreTempo = "restore_tempo";
constexpr std::array<std::string_view, 2> kAnalysisTools = {"analyze_spectrum", "track_pitch"};

std::string_view corrective_tool(IntegrityCheck c) noexcept
{
    switch (c)
    {
        case IntegrityCheck::Snr: return kDenoise;
        case IntegrityCheck::Pitch: return kCorrectPitch;
        case IntegrityCheck::Duration: return kRestoreTempo;
    }
    return kDenoise;
}

bool is_analysis(std::string_view name) noexcept
{
    return std::find(kAnalysisTools.begin(), kAnalysisTools.end(), name) != kAnalysisTools.end();
}

template <typename P>
const P* find_params(const OracleTruth& truth)
{
    for (const auto& s: truth.specs)
        if (const auto* p = std::get_if<P>(&s.params))
            return p;
    return nullptr;
}

std::size_t count_calls(std::span<const ChatTurn> turns, std::string_view name)
{
    return static_cast<std::size_t>(std::count_if(turns.begin(), turns.end(), [&](const ChatTurn& t) {
        return t.role == Role::Tool && t.tool_call && t.tool_call->name == name;
    }));
}

std::string answer(std::string_view lead, Emotion label)
{
    return fmt::format("{}\nEmotion: {}", lead, to_string(label));
}

std::string call(std::string_view lead, std::string_view tool, std::string_view args = {})
{
    return fmt::format("{} [TOOL: {}({})]", lead, tool, args);
}

} // namespace

void validate(const OraclePolicy& p)
{
    if (!(p.alpha >= 0.0 && p.alpha <= 1.0))
        throw InvalidArgumentError(fmt::format("oracle alpha must lie in [0, 1], got {}", p.alpha));
    if (!std::isfinite(p.min_snr_db))
        throw InvalidArgumentError("oracle min_snr_db must be finite");
    if (!(p.f0_tolerance > 0.0 && p.f0_tolerance < 1.0))
        throw InvalidArgumentError(fmt::format("oracle f0_tolerance must lie in (0, 1), got {}", p.f0_tolerance));
    if (!(p.duration_tolerance > 0.0 && p.duration_tolerance < 1.0))
        throw InvalidArgumentError(
            fmt::format("oracle duration_tolerance must lie in (0, 1), got {}", p.duration_tolerance));
    if (p.max_repeats == 0)
        throw InvalidArgumentError("oracle max_repeats must be at least 1");
}

OraclePolicy policy_from_json(const nlohmann::json& j)
{
    static const std::set<std::string, std::less<>> kKeys = {
        "alpha", "seed", "min_snr_db", "f0_tolerance", "duration_tolerance", "assess_first", "max_repeats",
    };
    if (!j.is_object())
        throw InvalidArgumentError("oracle policy must be a JSON object");
    for (const auto& [key, _]: j.items())
        if (!kKeys.count(key))
            throw InvalidArgumentError("unknown oracle policy key: " + key);
    OraclePolicy p;
    try
    {
        p.alpha = j.value("alpha", p.alpha);
        p.seed = j.value("seed", p.seed);
        p.min_snr_db = j.value("min_snr_db", p.min_snr_db);
        p.f0_tolerance = j.value("f0_tolerance", p.f0_tolerance);
        p.duration_tolerance = j.value("duration_tolerance", p.duration_tolerance);
        p.assess_first = j.value("assess_first", p.assess_first);
        p.max_repeats = j.value("max_repeats", p.max_repeats);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw InvalidArgumentError(std::string("malformed oracle policy: ") + e.what());
    }
    validate(p);
    return p;
}

nlohmann::ordered_json to_json(const OraclePolicy& p)
{
    nlohmann::ordered_json j;
    j["alpha"] = p.alpha;
    j["seed"] = p.seed;
    j["min_snr_db"] = p.min_snr_db;
    j["f0_tolerance"] = p.f0_tolerance;
    j["duration_tolerance"] = p.duration_tolerance;
    j["assess_first"] = p.assess_first;
    j["max_repeats"] = p.max_repeats;
    return j;
}

OracleTruth make_truth(Emotion label, const Waveform& clean, std::vector<perturb::PerturbationSpec> specs)
{
    OracleTruth t;
    t.label = label;
    t.reference_f0_hz = track_pitch(clean).median_voiced_hz();
    std::size_t length = clean.size();
    for (const auto& s: specs)
        if (const auto* p = std::get_if<perturb::ReverbParams>(&s.params))
            length += perturb::room_ir_length(p->rt60_ms, p->room_size_m3, clean.sample_rate()) - 1;
    t.reference_duration_s = static_cast<double>(length) / clean.sample_rate();
    t.specs = std::move(specs);
    return t;
}

std::string_view to_string(IntegrityCheck c) noexcept
{
    switch (c)
    {
        case IntegrityCheck::Snr: return "snr";
        case IntegrityCheck::Pitch: return "pitch";
        case IntegrityCheck::Duration: return "duration";
    }
    return "snr";
}

std::vector<IntegrityCheck> failed_checks(const ops::FeatureReport& m, const OracleTruth& truth,
                                          const OraclePolicy& policy)
{
    std::vector<IntegrityCheck> out;
    if (m.estimated_snr_db < policy.min_snr_db)
        out.push_back(IntegrityCheck::Snr);
    if (truth.reference_duration_s > 0.0 &&
        std::abs(m.duration_s / truth.reference_duration_s - 1.0) > policy.duration_tolerance)
        out.push_back(IntegrityCheck::Duration);
    if (truth.reference_f0_hz > 0.0 &&
        (m.f0_median_hz <= 0.0 || std::abs(m.f0_median_hz / truth.reference_f0_hz - 1.0) > policy.f0_tolerance))
        out.push_back(IntegrityCheck::Pitch);
    return out;
}

Emotion decoy_label(Emotion truth, std::string_view record_id) noexcept
{
    const std::size_t offset = 1 + stable_hash32(record_id) % (kEmotionCount - 1);
    return static_cast<Emotion>((emotion_index(truth) + offset) % kEmotionCount);
}

OracleBackend::OracleBackend(OraclePolicy policy, std::map<std::string, OracleTruth, std::less<>> truths)
    : _policy(policy), _truths(std::move(truths))
{
    validate(_policy);
}

std::string OracleBackend::id() const
{
    return fmt::format("oracle(alpha={:.2f},seed={})", _policy.alpha, _policy.seed);
}

std::string OracleBackend::complete(const BackendRequest& request) const
{
    const auto it = _truths.find(request.record_id);
    if (it == _truths.end())
        throw BackendError(fmt::format("oracle has no hidden record for '{}'", request.record_id));
    const OracleTruth& truth = it->second;

    std::vector<std::string> tools;
    if (!request.turns.empty() && request.turns.front().role == Role::System)
        tools = advertised_tools(request.turns.front().text);
    const auto offered = [&](std::string_view name) {
        return std::find(tools.begin(), tools.end(), name) != tools.end();
    };

    ops::FeatureReport m;
    std::vector<IntegrityCheck> failed;
    try
    {
        m = ops::analyze_spectrum(request.audio);
        failed = failed_checks(m, truth, _policy);
    }
    catch (const InvalidArgumentError&)
    {
        return answer("The clip is too short to judge.", decoy_label(truth.label, request.record_id));
    }

    if (failed.empty())
        return answer(fmt::format("Estimated SNR {:.1f} dB, median f0 {:.1f} Hz, duration {:.2f} s; the voice is "
                                  "clear enough to judge.",
                                  m.estimated_snr_db, m.f0_median_hz, m.duration_s),
                      truth.label);
    const Emotion decoy = decoy_label(truth.label, request.record_id);
    if (tools.empty())
        return answer(fmt::format("The {} of the clip sounds off, but this is my best reading.", to_string(failed[0])),
                      decoy);

    if (_policy.assess_first)
    {
        bool assessed = false;
        for (auto a: kAnalysisTools)
            assessed = assessed || count_calls(request.turns, a) > 0;
        if (!assessed)
            for (auto a: kAnalysisTools)
                if (offered(a))
                    return call("Let me measure the signal before changing anything.", a);
    }

    const IntegrityCheck check = failed.front();
    const std::string_view tool = corrective_tool(check);
    const std::size_t previous = count_calls(request.turns, tool);
    Rng rng = Rng::substream({_policy.seed, stable_hash32(request.record_id), request.step});
    const bool hit = rng.uniform() < _policy.alpha;

    if (hit && offered(tool))
    {
        if (previous >= _policy.max_repeats)
            return answer("The repairs did not help enough; going with my best reading.", decoy);
        switch (check)
        {
            case IntegrityCheck::Snr: {
                const double os = std::clamp(1.5 + 0.4 * (_policy.min_snr_db - m.estimated_snr_db), 2.0, 4.0);
                return call(fmt::format("Estimated SNR is {:.1f} dB; the noise floor masks the voice.",
                                        m.estimated_snr_db),
                            tool, fmt::format("over_subtraction={:.2f}", os));
            }
            case IntegrityCheck::Pitch: {
                const auto* p = find_params<perturb::PitchShiftParams>(truth);
                double semitones = 0.0;
                if (p && previous == 0)
                    semitones = -p->semitones;
                else if (m.f0_median_hz > 0.0)
                    semitones = 12.0 * std::log2(truth.reference_f0_hz / m.f0_median_hz);
                else
                    break;
                semitones = std::clamp(semitones, -12.0, 12.0);
                return call(fmt::format("The voice sounds shifted by about {:.2f} semitones.", -semitones), tool,
                            fmt::format("semitones={:.6f}", semitones));
            }
            case IntegrityCheck::Duration: {
                const auto* p = find_params<perturb::TimeStretchParams>(truth);
                double factor = p && previous == 0 ? p->stretch_factor : truth.reference_duration_s / m.duration_s;
                factor = std::clamp(factor, 0.25, 4.0);
                return call(fmt::format("The delivery sounds sped up by a factor of about {:.3f}.", factor), tool,
                            fmt::format("factor={:.6f}", factor));
            }
        }
    }

    std::set<std::string_view> excluded;
    for (auto c: failed)
        excluded.insert(corrective_tool(c));
    std::vector<std::string_view> order;
    for (const auto& t: tools)
        if (is_analysis(t))
            order.push_back(t);
    for (const auto& t: tools)
        if (!is_analysis(t))
            order.push_back(t);
    for (auto t: order)
        if (!excluded.count(t) && count_calls(request.turns, t) == 0)
            return call("Let me look at the signal from another angle.", t);
    return answer(fmt::format("The {} still sounds wrong; this is my best reading.", to_string(check)), decoy);
}

} // namespace tws::engine
