// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace tws::theory
{

enum class RhoMode
{
    /// Each hit multiplies the residual by rho' ~ U[0.8 rho, rho].
    Sampled,
    /// Each hit multiplies the residual by rho exactly.
    Exact,
};

inline constexpr double kRhoLowerFraction = 0.8;

struct SimConfig
{
    double alpha = 0.5;
    double rho = 0.5;
    std::size_t k_steps = 3;
    std::size_t trials = 10000;
    double initial_norm = 1.0;
    std::uint64_t seed = 0;
    RhoMode rho_mode = RhoMode::Sampled;
};

/// Throws InvalidArgumentError.
void validate(const SimConfig& cfg);

/// (1 - alpha (1 - rho))^k
[[nodiscard]] double contraction_factor(double alpha, double rho, std::size_t k);

struct ContractionResult
{
    /// Index = step, 0..k_steps.
    std::vector<double> empirical_mean;
    std::vector<double> theoretical;
    std::vector<double> standard_error;
    /// Largest residual any trial reached at any step.
    double max_residual = 0.0;
};

/// Trial i draws from the substream (seed, i), so the result does not depend
/// on `workers`.
[[nodiscard]] ContractionResult simulate_contraction(const SimConfig& cfg, std::size_t workers = 1);

/// CSV with columns step,theoretical,empirical_mean,stderr.
void write_csv(std::ostream& out, const ContractionResult& r);

struct BoundConfig
{
    double lipschitz_L = 1.0;
    double baseline_loss = 0.0;
};

struct BoundComparison
{
    double tws_bound = 0.0;
    double baseline_bound = 0.0;
    /// (1 - alpha (1 - rho))^-K; infinite on full recovery.
    double improvement_factor = 1.0;
};

[[nodiscard]] BoundComparison compare_bounds(const SimConfig& cfg, const BoundConfig& bc);

/// Linearisation of 1 - (1 - x)^K holds while alpha K (1 - rho) stays below this.
inline constexpr double kLinearisationGate = 0.3;

struct GainRatioResult
{
    double gain1 = 0.0;
    double gain2 = 0.0;
    /// Empty when alpha = 0 (both gains vanish).
    std::optional<double> empirical_ratio;
    /// Closed form 1 - (1 - alpha (1 - rho))^K for both, divided.
    std::optional<double> exact_ratio;
    /// (1 - rho1) / (1 - rho2)
    double predicted_ratio = 0.0;
    /// False when the gate fails for either rho.
    bool approximation_valid = true;
};

/// Both arms share each trial's hit draws (exact-rho mode), so rho1 = rho2
/// gives a ratio of exactly 1.
[[nodiscard]] GainRatioResult gain_ratio_experiment(double rho1, double rho2, double alpha, std::size_t k,
                                                    std::size_t trials, std::uint64_t seed);

} // namespace tws::theory
