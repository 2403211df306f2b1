// SPDX-License-Identifier: Apache-2.0
#include "../support/oracles.hpp"

#include "tws/core/synth.hpp"
#include "tws/ops/adaptivity.hpp"
#include "tws/ops/registry.hpp"

#include <gtest/gtest.h>

#include <set>

namespace
{

using namespace tws;
using namespace tws::ops;
using perturb::PerturbationKind;

std::vector<Waveform> small_corpus()
{
    std::vector<Waveform> c;
    c.push_back(synth::tone_burst(440.0, 3.0));
    c.push_back(synth::tone_stack(150.0, 3.0));
    for (std::uint64_t i = 0; i < 3; ++i)
    {
        Rng rng(200 + i);
        c.push_back(synth::speech_like({.f0_hz = 110.0 + 30.0 * i, .duration_s = 3.0}, rng));
    }
    return c;
}

TEST(Registry, SchemaRoundTrip)
{
    const auto reg = default_registry();
    EXPECT_EQ(reg.size(), 8u);
    std::set<std::string> names;
    for (const auto& e: reg.entries())
    {
        EXPECT_TRUE(is_valid_identifier(e.descriptor.name));
        EXPECT_TRUE(names.insert(e.descriptor.name).second);
        for (const auto& p: e.descriptor.params)
        {
            EXPECT_TRUE(p.accepts(p.default_value)) << p.name;
            EXPECT_DOUBLE_EQ(p.parse(p.render_default()), p.default_value);
            EXPECT_THROW((void)p.parse(std::to_string(p.max + 1.0)), InvalidOperatorArgsError);
            EXPECT_THROW((void)p.parse(std::to_string(p.min - 1.0)), InvalidOperatorArgsError);
            EXPECT_THROW((void)p.parse("abc"), InvalidOperatorArgsError);
            EXPECT_THROW((void)p.parse("nan"), InvalidOperatorArgsError);
        }
        const auto resolved = reg.resolve(e.descriptor, {});
        EXPECT_EQ(resolved.size(), e.descriptor.params.size());
    }
}

TEST(Registry, LookupAndArguments)
{
    const auto reg = default_registry();
    ASSERT_NE(reg.find("DeNoise"), nullptr);
    EXPECT_EQ(reg.find("fly_to_moon"), nullptr);
    EXPECT_THROW((void)reg.at("fly_to_moon"), UnknownOperatorError);
    const auto& d = reg.at("denoise").descriptor;
    EXPECT_DOUBLE_EQ(reg.resolve(d, {{"over_subtraction", "2.0"}}).at("over_subtraction"), 2.0);
    EXPECT_THROW((void)reg.resolve(d, {{"over_subtraction", "9"}}), InvalidOperatorArgsError);
    EXPECT_THROW((void)reg.resolve(d, {{"strength", "1"}}), InvalidOperatorArgsError);
    EXPECT_THROW((void)reg.resolve(d, {{"over_subtraction", "1"}, {"over_subtraction", "2"}}),
                 InvalidOperatorArgsError);

    OperatorRegistry r2;
    EXPECT_THROW(r2.add({"bad name", "x", {}}, {}), InvalidArgumentError);
    r2.add(identity_operator().descriptor, identity_operator().fn);
    EXPECT_THROW(r2.add(identity_operator().descriptor, identity_operator().fn), InvalidArgumentError);
}

TEST(Registry, CategoriesAndExclusion)
{
    const auto reg = default_registry();
    auto cat = [&](const char* n) { return reg.at(n).descriptor.category; };
    EXPECT_EQ(cat("denoise"), OperatorCategory::Denoise);
    EXPECT_EQ(cat("dereverb"), OperatorCategory::Enhance);
    EXPECT_EQ(cat("normalize_loudness"), OperatorCategory::Normalize);
    EXPECT_EQ(cat("analyze_spectrum"), OperatorCategory::Analyze);
    EXPECT_EQ(reg.at("extract_voice").descriptor.group, OperatorGroup::Separation);

    const std::vector<OperatorCategory> no_denoise{OperatorCategory::Denoise};
    const auto r = reg.without(no_denoise);
    EXPECT_EQ(r.size(), 7u);
    EXPECT_EQ(r.find("denoise"), nullptr);
    const std::vector<OperatorCategory> all{OperatorCategory::Denoise, OperatorCategory::Enhance,
                                            OperatorCategory::Normalize, OperatorCategory::Analyze};
    EXPECT_TRUE(reg.without(all).empty());
    EXPECT_EQ(category_from_string("Normalize"), OperatorCategory::Normalize);
}

TEST(Registry, OutputStringsAreFixed)
{
    const auto reg = default_registry();
    const auto x = tws::testing::sine(1000.0, 1.0, std::sqrt(2.0) * 0.1);
    const auto out = reg.invoke("normalize_loudness", x, RawArgs{{"target_dbfs", "-20"}});
    ASSERT_TRUE(out.audio);
    EXPECT_EQ(out.text, "AUDIO_UPDATED duration_s=1.000 rms_dbfs=-20.00");
    EXPECT_EQ(render_audio_update(Waveform::zeros(8000)), "AUDIO_UPDATED duration_s=0.500 rms_dbfs=-inf");

    FeatureReport r;
    r.estimated_snr_db = 12.345;
    r.spectral_centroid_hz = 1000.04;
    r.spectral_rolloff_hz = 1500.0;
    r.spectral_flatness = 0.01234;
    r.rms_dbfs = -20.0;
    r.f0_median_hz = 0.0;
    r.voiced_fraction = 0.5;
    r.duration_s = 1.0;
    EXPECT_EQ(render(r), "estimated_snr_db=12.35 spectral_centroid_hz=1000.0 spectral_rolloff_hz=1500.0 "
                         "spectral_flatness=0.0123 rms_dbfs=-20.00 f0_median_hz=0.00 voiced_fraction=0.500 "
                         "duration_s=1.000");

    const auto a = reg.invoke("analyze_spectrum", x);
    EXPECT_FALSE(a.audio);
    EXPECT_TRUE(a.report);
    EXPECT_EQ(a.text.find("estimated_snr_db="), 0u);
    EXPECT_EQ(a.text.find('\n'), std::string::npos);
    const auto p = reg.invoke("track_pitch", tws::testing::vowel(200.0, 0.5));
    EXPECT_EQ(p.text.find("f0_median_hz=2"), 0u);
}

TEST(Registry, SignatureListsDefaults)
{
    const auto reg = default_registry();
    EXPECT_EQ(reg.at("denoise").descriptor.signature(),
              "denoise(over_subtraction=1.5): Spectral subtraction of the stationary noise floor.");
    EXPECT_EQ(reg.at("dereverb").descriptor.signature().rfind("dereverb(): ", 0), 0u);
}

TEST(Adaptivity, IdentityIsExactlyOne)
{
    auto reg = default_registry();
    const auto id = identity_operator();
    reg.add(id.descriptor, id.fn);
    const auto corpus = small_corpus();
    for (auto kind: perturb::kAllKinds)
    {
        Rng rng(1);
        const auto rep = measure_adaptivity(reg, "identity", kind, corpus, {30, ArgPolicy::Defaults}, rng);
        EXPECT_EQ(rep.rho_estimate, 1.0) << perturb::to_string(kind);
        EXPECT_EQ(rep.trials + rep.skipped, 30u);
        EXPECT_GT(rep.epsilon, 0.0);
    }
}

TEST(Adaptivity, CheatingOperatorIsZero)
{
    const auto corpus = small_corpus();
    for (auto kind: perturb::kAllKinds)
    {
        Rng rng(2);
        const auto rep = measure_adaptivity(
            "clean_reference", [](const Waveform&, const Waveform& clean) { return clean; }, kind, corpus, 30, rng);
        EXPECT_EQ(rep.rho_estimate, 0.0);
    }
}

TEST(Adaptivity, DenoiseShrinksAdditiveNoise)
{
    const auto reg = default_registry();
    const auto corpus = small_corpus();
    Rng rng(3);
    const auto rep = measure_adaptivity(reg, "denoise", PerturbationKind::AdditiveNoise, corpus, {}, rng);
    EXPECT_LT(rep.rho_estimate, 1.0);
    EXPECT_GE(rep.trials, 30u);
}

TEST(Adaptivity, Preconditions)
{
    const auto reg = default_registry();
    const auto corpus = small_corpus();
    Rng rng(4);
    EXPECT_THROW((void)measure_adaptivity(reg, "denoise", PerturbationKind::AdditiveNoise, corpus, {29}, rng),
                 InvalidArgumentError);
    EXPECT_THROW((void)measure_adaptivity(reg, "denoise", PerturbationKind::AdditiveNoise, {}, {}, rng),
                 InvalidArgumentError);
    EXPECT_THROW((void)measure_adaptivity(reg, "teleport", PerturbationKind::AdditiveNoise, corpus, {}, rng),
                 UnknownOperatorError);
    EXPECT_THROW((void)measure_adaptivity(reg, "analyze_spectrum", PerturbationKind::AdditiveNoise, corpus, {}, rng),
                 InvalidArgumentError);
}

TEST(Adaptivity, InverseArgs)
{
    const perturb::PerturbationSpec ps{PerturbationKind::PitchShift, perturb::PitchShiftParams{3.0, true}, {}};
    EXPECT_DOUBLE_EQ(inverse_args("correct_pitch", ps).at("semitones"), -3.0);
    const perturb::PerturbationSpec ts{PerturbationKind::TimeStretch, perturb::TimeStretchParams{1.2, {}}, {}};
    EXPECT_DOUBLE_EQ(inverse_args("restore_tempo", ts).at("factor"), 1.2);
    EXPECT_TRUE(inverse_args("denoise", ts).empty());
}

} // namespace
