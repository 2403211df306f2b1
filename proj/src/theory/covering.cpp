// SPDX-License-Identifier: Apache-2.0
#include "tws/theory/covering.hpp"

#include "tws/core/error.hpp"
#include "tws/core/synth.hpp"

#include <fmt/format.h>

#include <atomic>
#include <algorithm>
#include <mutex>
#include <thread>

namespace tws::theory
{

std::vector<Waveform> covering_corpus(std::uint64_t seed, std::size_t size)
{
    if (size < kMinCoveringCorpus)
        throw InvalidArgumentError(fmt::format("covering corpus needs at least {} signals", kMinCoveringCorpus));
    std::vector<Waveform> out;
    out.reserve(size);
    for (std::size_t i = 0; i < size; ++i)
    {
        Rng rng = Rng::substream({seed, static_cast<std::uint64_t>(i)});
        switch (i % 3)
        {
            case 0: out.push_back(synth::tone_burst(rng.uniform(200.0, 1000.0), kCoveringCorpusSeconds)); break;
            case 1: out.push_back(synth::tone_stack(rng.uniform(100.0, 250.0), kCoveringCorpusSeconds)); break;
            default:
                out.push_back(synth::speech_like(
                    {.f0_hz = rng.uniform(100.0, 240.0), .duration_s = kCoveringCorpusSeconds}, rng));
        }
    }
    return out;
}

const ops::AdaptivityReport& CoveringMatrix::at(std::string_view op, perturb::PerturbationKind kind) const
{
    for (std::size_t i = 0; i < operators.size(); ++i)
        if (operators[i] == op)
            for (std::size_t j = 0; j < kinds.size(); ++j)
                if (kinds[j] == kind)
                    return cells[i * kinds.size() + j];
    throw InvalidArgumentError(fmt::format("no cell for {} x {}", op, perturb::to_string(kind)));
}

CoveringMatrix covering_study(const ops::OperatorRegistry& registry, std::span<const perturb::PerturbationKind> kinds,
                              std::span<const Waveform> corpus, const CoveringOptions& options)
{
    if (corpus.size() < kMinCoveringCorpus)
        throw InvalidArgumentError(fmt::format("covering study needs at least {} signals", kMinCoveringCorpus));
    if (kinds.empty())
        throw InvalidArgumentError("covering study needs at least one perturbation kind");

    CoveringMatrix m;
    m.kinds.assign(kinds.begin(), kinds.end());
    for (const auto& e: registry.entries())
        if (e.descriptor.returns == ops::OutputKind::Audio)
            m.operators.push_back(e.descriptor.name);
    m.cells.resize(m.operators.size() * m.kinds.size());

    const auto run_cell = [&](std::size_t c) {
        const auto& op = m.operators[c / m.kinds.size()];
        const auto kind = m.kinds[c % m.kinds.size()];
        Rng rng = Rng::substream({options.seed, stable_hash32(op), static_cast<std::uint64_t>(kind)});
        m.cells[c] = ops::measure_adaptivity(registry, op, kind, corpus, {options.trials, options.args}, rng);
    };
    const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(m.cells.size(), 1));
    if (workers == 1)
    {
        for (std::size_t c = 0; c < m.cells.size(); ++c)
            run_cell(c);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex mu;
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (std::size_t c; (c = next++) < m.cells.size();)
                    {
                        try
                        {
                            run_cell(c);
                        }
                        catch (...)
                        {
                            std::lock_guard lock(mu);
                            if (!failure)
                                failure = std::current_exception();
                        }
                    }
                });
        }
        if (failure)
            std::rethrow_exception(failure);
    }

    for (std::size_t j = 0; j < m.kinds.size(); ++j)
    {
        KindVerdict v{m.kinds[j], false, {}, 0.0};
        for (std::size_t i = 0; i < m.operators.size(); ++i)
        {
            const auto& cell = m.cells[i * m.kinds.size() + j];
            if (cell.trials > 0 && (v.best_operator.empty() || cell.rho_estimate < v.best_rho))
            {
                v.best_operator = m.operators[i];
                v.best_rho = cell.rho_estimate;
            }
        }
        v.covered = !v.best_operator.empty() && v.best_rho < 1.0;
        m.verdicts.push_back(std::move(v));
    }
    return m;
}

void write_csv(std::ostream& out, const CoveringMatrix& m)
{
    out << "operator,kind,rho_estimate,epsilon,trials\n";
    for (const auto& c: m.cells)
        out << fmt::format("{},{},{:.6f},{:.6f},{}\n", c.operator_name, perturb::to_string(c.perturbation_kind),
                           c.rho_estimate, c.epsilon, c.trials);
}

} // namespace tws::theory
