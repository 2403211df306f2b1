// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/error.hpp"
#include "tws/core/pitch.hpp"
#include "tws/core/waveform.hpp"
#include "tws/ops/analysis.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tws::ops
{

class UnknownOperatorError : public InvalidArgumentError
{
  public:
    explicit UnknownOperatorError(std::string_view name);
};

class InvalidOperatorArgsError : public InvalidArgumentError
{
  public:
    using InvalidArgumentError::InvalidArgumentError;
};

/// Ablation grouping (one per operator).
enum class OperatorCategory
{
    Denoise,
    Enhance,
    Normalize,
    Analyze,
};

/// Functional grouping by what an operator does to the signal.
enum class OperatorGroup
{
    Enhancement,
    Analysis,
    Transformation,
    Separation,
};

[[nodiscard]] std::string_view to_string(OperatorCategory c) noexcept;
[[nodiscard]] std::string_view to_string(OperatorGroup g) noexcept;
[[nodiscard]] OperatorCategory category_from_string(std::string_view s);

enum class ParamType
{
    Real,
    Integer,
    Boolean,
};

struct ParamSpec
{
    std::string name;
    ParamType type = ParamType::Real;
    double min = 0.0;
    double max = 0.0;
    double default_value = 0.0;
    std::string doc;

    /// Parses and range-checks one textual value; throws InvalidOperatorArgsError.
    [[nodiscard]] double parse(std::string_view text) const;
    [[nodiscard]] bool accepts(double value) const noexcept;
    [[nodiscard]] std::string render_default() const;
};

enum class OutputKind
{
    Audio,
    Report,
};

struct OperatorDescriptor
{
    std::string name;
    std::string summary;
    std::vector<ParamSpec> params;
    OutputKind returns = OutputKind::Audio;
    OperatorCategory category = OperatorCategory::Enhance;
    OperatorGroup group = OperatorGroup::Enhancement;

    /// "name(p=default, ...): summary"
    [[nodiscard]] std::string signature() const;
};

/// Resolved arguments, keyed by parameter name, defaults filled in.
using ArgValues = std::map<std::string, double, std::less<>>;
using RawArgs = std::vector<std::pair<std::string, std::string>>;

struct ToolOutput
{
    std::optional<Waveform> audio;
    std::optional<FeatureReport> report;
    std::optional<PitchContour> contour;
    /// Exact text handed back to the model.
    std::string text;
    bool used_fallback = false;
};

using OperatorFn = std::function<ToolOutput(const Waveform&, const ArgValues&)>;

struct OperatorEntry
{
    OperatorDescriptor descriptor;
    OperatorFn fn;
};

class OperatorRegistry
{
  public:
    /// Throws InvalidArgumentError on a duplicate or malformed name.
    void add(OperatorDescriptor descriptor, OperatorFn fn);

    /// Case-insensitive lookup.
    [[nodiscard]] const OperatorEntry* find(std::string_view name) const noexcept;
    [[nodiscard]] const OperatorEntry& at(std::string_view name) const;
    [[nodiscard]] const std::vector<OperatorEntry>& entries() const noexcept { return _entries; }
    [[nodiscard]] bool empty() const noexcept { return _entries.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return _entries.size(); }
    [[nodiscard]] std::vector<std::string> names() const;

    /// Copy without the operators in the excluded categories.
    [[nodiscard]] OperatorRegistry without(std::span<const OperatorCategory> excluded) const;

    /// Validates raw key=value arguments against the schema and fills defaults.
    [[nodiscard]] ArgValues resolve(const OperatorDescriptor& d, const RawArgs& raw) const;

    [[nodiscard]] ToolOutput invoke(std::string_view name, const Waveform& x, const RawArgs& raw = {}) const;
    [[nodiscard]] ToolOutput invoke(std::string_view name, const Waveform& x, const ArgValues& args) const;

  private:
    std::vector<OperatorEntry> _entries;
};

/// denoise, dereverb, normalize_loudness, analyze_spectrum, track_pitch,
/// correct_pitch, restore_tempo, extract_voice.
[[nodiscard]] OperatorRegistry default_registry();

/// No-op operator used to calibrate adaptivity measurements.
[[nodiscard]] OperatorEntry identity_operator();

[[nodiscard]] bool is_valid_identifier(std::string_view s) noexcept;

} // namespace tws::ops
