// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tws/core/waveform.hpp"
#include "tws/engine/backend.hpp"
#include "tws/ops/analysis.hpp"
#include "tws/perturb/spec.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tws::engine
{

/// Feature thresholds and tool-selection accuracy of the rule-based stand-in model.
struct OraclePolicy
{
    /// Per-step probability of choosing the corrective tool for a failed check.
    double alpha = 1.0;
    std::uint64_t seed = 0;
    /// Minimum estimated SNR for the audio to count as clean.
    double min_snr_db = 12.0;
    /// Allowed relative deviation of the median f0 from the reference.
    double f0_tolerance = 0.06;
    /// Allowed relative deviation of the duration from the reference.
    double duration_tolerance = 0.03;
    /// Call an analysis tool once before the first corrective tool.
    bool assess_first = false;
    /// Give up on a check after this many corrective calls for it.
    std::size_t max_repeats = 3;
};

/// Throws InvalidArgumentError.
void validate(const OraclePolicy& policy);
[[nodiscard]] OraclePolicy policy_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::ordered_json to_json(const OraclePolicy& policy);

/// What the oracle knows about a record and never reveals.
struct OracleTruth
{
    Emotion label = Emotion::Neutral;
    std::vector<perturb::PerturbationSpec> specs;
    /// Duration the clean clip has after every non-tempo perturbation (a room
    /// response lengthens the clip by its tail).
    double reference_duration_s = 0.0;
    /// Median f0 of the clean clip.
    double reference_f0_hz = 0.0;
};

/// Measures the clean clip and accounts for the reverb tail of `specs`.
[[nodiscard]] OracleTruth make_truth(Emotion label, const Waveform& clean,
                                     std::vector<perturb::PerturbationSpec> specs = {});

enum class IntegrityCheck
{
    Snr,
    Pitch,
    Duration,
};

[[nodiscard]] std::string_view to_string(IntegrityCheck c) noexcept;

/// Checks `measured` fails under `policy`, in the order SNR, duration, pitch.
/// Tempo comes before pitch since a stretched clip biases the f0 estimate.
[[nodiscard]] std::vector<IntegrityCheck> failed_checks(const ops::FeatureReport& measured, const OracleTruth& truth,
                                                        const OraclePolicy& policy);

/// Deterministic wrong label for a record.
[[nodiscard]] Emotion decoy_label(Emotion truth, std::string_view record_id) noexcept;

/// Answers correctly only when the current audio passes every integrity check.
/// Otherwise, with probability alpha (seeded by record and step) it calls the
/// tool that corrects the first failed check, using the exact inverse of the
/// hidden perturbation on the first call and the measured deviation after
/// that. On a miss it calls an unused tool that corrects none of the failed
/// checks, preferring analysis tools, and answers with the decoy label once
/// none is left. Only tools listed in the system prompt are used; with none
/// listed it answers at once.
class OracleBackend final : public ModelBackend
{
  public:
    OracleBackend(OraclePolicy policy, std::map<std::string, OracleTruth, std::less<>> truths);

    [[nodiscard]] std::string complete(const BackendRequest& request) const override;
    [[nodiscard]] std::string id() const override;
    [[nodiscard]] const OraclePolicy& policy() const noexcept { return _policy; }

  private:
    OraclePolicy _policy;
    std::map<std::string, OracleTruth, std::less<>> _truths;
};

} // namespace tws::engine
