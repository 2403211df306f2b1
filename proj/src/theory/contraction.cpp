// SPDX-License-Identifier: Apache-2.0
#include "tws/theory/contraction.hpp"

#include "tws/core/error.hpp"
#include "tws/core/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <atomic>
#include <span>
#include <thread>

namespace tws::theory
{

namespace
{

constexpr std::size_t kBlock = 1024;

/// Per-step running moments of one block of trials.
struct Moments
{
    std::vector<double> mean, m2;
    std::size_t n = 0;
    double max_residual = 0.0;

    explicit Moments(std::size_t steps) : mean(steps, 0.0), m2(steps, 0.0) {}

    void add(std::span<const double> r)
    {
        ++n;
        for (std::size_t s = 0; s < r.size(); ++s)
        {
            const double d = r[s] - mean[s];
            mean[s] += d / static_cast<double>(n);
            m2[s] += d * (r[s] - mean[s]);
            max_residual = std::max(max_residual, r[s]);
        }
    }

    /// Chan et al. pairwise merge.
    void merge(const Moments& o)
    {
        if (o.n == 0)
            return;
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n), nt = na + nb;
        for (std::size_t s = 0; s < mean.size(); ++s)
        {
            const double d = o.mean[s] - mean[s];
            if (n == 0)
                mean[s] = o.mean[s];
            else if (d != 0.0)
                mean[s] += d * nb / nt;
            m2[s] += o.m2[s] + d * d * na * nb / nt;
        }
        n += o.n;
        max_residual = std::max(max_residual, o.max_residual);
    }
};

void run_trial(const SimConfig& cfg, std::size_t trial, std::span<double> r)
{
    r[0] = cfg.initial_norm;
    const bool always = cfg.alpha >= 1.0, never = cfg.alpha <= 0.0;
    const bool exact = cfg.rho_mode == RhoMode::Exact;
    if (never || (always && exact))
    {
        for (std::size_t k = 1; k < r.size(); ++k)
            r[k] = never ? r[k - 1] : r[k - 1] * cfg.rho;
        return;
    }
    Rng rng = Rng::substream({cfg.seed, static_cast<std::uint64_t>(trial)});
    for (std::size_t k = 1; k < r.size(); ++k)
    {
        const bool hit = always || rng.uniform() < cfg.alpha;
        double factor = 1.0;
        if (hit)
            factor = exact ? cfg.rho : rng.uniform(kRhoLowerFraction * cfg.rho, cfg.rho);
        r[k] = r[k - 1] * factor;
    }
}

Moments run_block(const SimConfig& cfg, std::size_t block)
{
    Moments m(cfg.k_steps + 1);
    std::vector<double> r(cfg.k_steps + 1);
    const std::size_t end = std::min(cfg.trials, (block + 1) * kBlock);
    for (std::size_t i = block * kBlock; i < end; ++i)
    {
        run_trial(cfg, i, r);
        m.add(r);
    }
    return m;
}

} // namespace

void validate(const SimConfig& cfg)
{
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
        throw InvalidArgumentError(fmt::format("alpha must lie in [0, 1], got {}", cfg.alpha));
    if (!(cfg.rho >= 0.0 && cfg.rho <= 1.0))
        throw InvalidArgumentError(fmt::format("rho must lie in [0, 1], got {}", cfg.rho));
    if (cfg.trials < 1)
        throw InvalidArgumentError("trials must be at least 1");
    if (!(cfg.initial_norm > 0.0 && std::isfinite(cfg.initial_norm)))
        throw InvalidArgumentError(fmt::format("initial_norm must be positive, got {}", cfg.initial_norm));
}

double contraction_factor(double alpha, double rho, std::size_t k)
{
    return std::pow(1.0 - alpha * (1.0 - rho), static_cast<double>(k));
}

ContractionResult simulate_contraction(const SimConfig& cfg, std::size_t workers)
{
    validate(cfg);
    const std::size_t blocks = (cfg.trials + kBlock - 1) / kBlock;
    std::vector<std::optional<Moments>> parts(blocks);
    workers = std::clamp<std::size_t>(workers, 1, blocks);
    if (workers == 1)
    {
        for (std::size_t b = 0; b < blocks; ++b)
            parts[b] = run_block(cfg, b);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t b; (b = next++) < blocks;)
                    parts[b] = run_block(cfg, b);
            });
    }

    Moments total(cfg.k_steps + 1);
    for (const auto& p: parts)
        total.merge(*p);

    ContractionResult out;
    out.empirical_mean = total.mean;
    out.max_residual = total.max_residual;
    const double n = static_cast<double>(total.n);
    for (std::size_t s = 0; s <= cfg.k_steps; ++s)
    {
        out.theoretical.push_back(contraction_factor(cfg.alpha, cfg.rho, s) * cfg.initial_norm);
        const double var = total.n > 1 ? total.m2[s] / (n - 1.0) : 0.0;
        out.standard_error.push_back(std::sqrt(std::max(var, 0.0) / n));
    }
    out.empirical_mean[0] = cfg.initial_norm;
    return out;
}

void write_csv(std::ostream& out, const ContractionResult& r)
{
    out << "step,theoretical,empirical_mean,stderr\n";
    for (std::size_t s = 0; s < r.empirical_mean.size(); ++s)
        out << fmt::format("{},{:.10g},{:.10g},{:.10g}\n", s, r.theoretical[s], r.empirical_mean[s],
                           r.standard_error[s]);
}

BoundComparison compare_bounds(const SimConfig& cfg, const BoundConfig& bc)
{
    validate(cfg);
    if (!std::isfinite(bc.lipschitz_L) || bc.lipschitz_L <= 0.0 || !std::isfinite(bc.baseline_loss) ||
        bc.baseline_loss < 0.0)
        throw InvalidArgumentError("bound config needs a positive finite L and a finite nonnegative loss");
    const double f = contraction_factor(cfg.alpha, cfg.rho, cfg.k_steps);
    BoundComparison b;
    b.baseline_bound = bc.baseline_loss + bc.lipschitz_L * cfg.initial_norm;
    b.tws_bound = bc.baseline_loss + bc.lipschitz_L * f * cfg.initial_norm;
    b.improvement_factor = f > 0.0 ? 1.0 / f : std::numeric_limits<double>::infinity();
    return b;
}

GainRatioResult gain_ratio_experiment(double rho1, double rho2, double alpha, std::size_t k, std::size_t trials,
                                      std::uint64_t seed)
{
    for (double rho: {rho1, rho2})
        if (!(rho >= 0.0 && rho < 1.0))
            throw InvalidArgumentError(fmt::format("gain ratio needs rho in [0, 1), got {}", rho));
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InvalidArgumentError(fmt::format("alpha must lie in [0, 1], got {}", alpha));
    if (trials < 1 || k < 1)
        throw InvalidArgumentError("gain ratio needs trials >= 1 and k >= 1");

    GainRatioResult out;
    out.predicted_ratio = (1.0 - rho1) / (1.0 - rho2);
    out.approximation_valid = alpha * static_cast<double>(k) * (1.0 - std::min(rho1, rho2)) <= kLinearisationGate;

    double sum1 = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < trials; ++i)
    {
        Rng rng = Rng::substream({seed, static_cast<std::uint64_t>(i)});
        double r1 = 1.0, r2 = 1.0;
        for (std::size_t s = 0; s < k; ++s)
            if (alpha > 0.0 && (alpha >= 1.0 || rng.uniform() < alpha))
            {
                r1 *= rho1;
                r2 *= rho2;
            }
        sum1 += r1;
        sum2 += r2;
    }
    out.gain1 = 1.0 - sum1 / static_cast<double>(trials);
    out.gain2 = 1.0 - sum2 / static_cast<double>(trials);
    if (alpha > 0.0 && out.gain2 > 0.0)
    {
        out.empirical_ratio = out.gain1 / out.gain2;
        out.exact_ratio = (1.0 - contraction_factor(alpha, rho1, k)) / (1.0 - contraction_factor(alpha, rho2, k));
    }
    return out;
}

} // namespace tws::theory
