// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"
#include "eval_inputs.hpp"

#include "tws/core/error.hpp"
#include "tws/theory/contraction.hpp"
#include "tws/theory/covering.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace tws::cli
{

namespace
{

// Runs `write` against --out when given, else stdout.
template <typename F>
void emit(const std::string& out, F&& write)
{
    if (out.empty())
    {
        write(std::cout);
        return;
    }
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file)
        throw WriteError("cannot write " + out);
    write(file);
    if (!file)
        throw WriteError("failed writing " + out);
}

nlohmann::json number_or_null(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
}

struct ContractionArgs
{
    theory::SimConfig sim;
    std::string rho_mode = "sampled";
    std::size_t workers = 1;
    std::string out;
};

struct BoundsArgs
{
    theory::SimConfig sim;
    theory::BoundConfig bound;
};

struct GainArgs
{
    double rho1 = 0.2;
    double rho2 = 0.6;
    double alpha = 0.1;
    std::size_t k = 2;
    std::size_t trials = 10000;
    std::uint64_t seed = 0;
};

struct CoveringArgs
{
    std::size_t corpus_size = 12;
    std::uint64_t corpus_seed = 0;
    std::vector<std::string> kinds = {"AN", "RE", "PS", "TS"};
    std::string args = "defaults";
    bool with_identity = false;
    theory::CoveringOptions options;
    std::string out;
};

void add_sim_options(CLI::App* cmd, theory::SimConfig& s)
{
    cmd->add_option("--alpha", s.alpha, "Probability of picking an adaptive operator")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--rho", s.rho, "Contraction factor of the operator")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--k", s.k_steps, "Reasoning steps")->capture_default_str();
    cmd->add_option("--initial-norm", s.initial_norm, "Initial perturbation norm")->capture_default_str();
}

void run_covering(const CoveringArgs& a)
{
    std::vector<perturb::PerturbationKind> kinds;
    for (const auto& k: a.kinds)
        kinds.push_back(perturb::kind_from_string(k));
    auto options = a.options;
    options.args = a.args == "matched-inverse" ? ops::ArgPolicy::MatchedInverse : ops::ArgPolicy::Defaults;
    auto registry = ops::default_registry();
    if (a.with_identity)
    {
        auto id = ops::identity_operator();
        registry.add(std::move(id.descriptor), std::move(id.fn));
    }
    const auto corpus = theory::covering_corpus(a.corpus_seed, a.corpus_size);
    const auto m = theory::covering_study(registry, kinds, corpus, options);
    emit(a.out, [&](std::ostream& os) { theory::write_csv(os, m); });
    for (const auto& v: m.verdicts)
        std::cerr << fmt::format("{:<14} covered={} best={} rho={:.4f}\n", perturb::to_string(v.kind), v.covered,
                                 v.best_operator, v.best_rho);
}

} // namespace

void add_theory_commands(CLI::App& app)
{
    auto* theory_cmd = app.add_subcommand("simulate-theory", "Monte Carlo checks of the contraction bounds");
    theory_cmd->require_subcommand(1);
    {
        auto a = std::make_shared<ContractionArgs>();
        auto* cmd = theory_cmd->add_subcommand("contraction", "Residual norm per step against the bound (CSV)");
        add_sim_options(cmd, a->sim);
        cmd->add_option("--trials", a->sim.trials, "Trials")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--seed", a->sim.seed, "Seed")->capture_default_str();
        cmd->add_option("--rho-mode", a->rho_mode, "Per-hit factor: exact rho or U[0.8 rho, rho]")
            ->check(CLI::IsMember({"sampled", "exact"}))
            ->capture_default_str();
        cmd->add_option("--workers", a->workers, "Threads")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--out", a->out, "CSV path (default stdout)");
        cmd->callback([a] {
            auto sim = a->sim;
            sim.rho_mode = a->rho_mode == "exact" ? theory::RhoMode::Exact : theory::RhoMode::Sampled;
            const auto r = theory::simulate_contraction(sim, a->workers);
            emit(a->out, [&](std::ostream& os) { theory::write_csv(os, r); });
        });
    }
    {
        auto a = std::make_shared<BoundsArgs>();
        auto* cmd = theory_cmd->add_subcommand("bounds", "TwS versus baseline loss bound (JSON)");
        add_sim_options(cmd, a->sim);
        cmd->add_option("--lipschitz", a->bound.lipschitz_L, "Lipschitz constant of the loss")->capture_default_str();
        cmd->add_option("--baseline-loss", a->bound.baseline_loss, "Loss on clean input")->capture_default_str();
        cmd->callback([a] {
            const auto b = theory::compare_bounds(a->sim, a->bound);
            nlohmann::ordered_json j;
            j["alpha"] = a->sim.alpha;
            j["rho"] = a->sim.rho;
            j["k"] = a->sim.k_steps;
            j["tws_bound"] = b.tws_bound;
            j["baseline_bound"] = b.baseline_bound;
            j["improvement_factor"] = number_or_null(b.improvement_factor);
            std::cout << j.dump(2) << '\n';
        });
    }
    {
        auto a = std::make_shared<GainArgs>();
        auto* cmd = theory_cmd->add_subcommand("gain-ratio", "Relative gain of two operators (JSON)");
        cmd->add_option("--rho1", a->rho1, "First contraction factor")->check(CLI::Range(0.0, 1.0))->capture_default_str();
        cmd->add_option("--rho2", a->rho2, "Second contraction factor")->check(CLI::Range(0.0, 1.0))->capture_default_str();
        cmd->add_option("--alpha", a->alpha, "Selection probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
        cmd->add_option("--k", a->k, "Reasoning steps")->capture_default_str();
        cmd->add_option("--trials", a->trials, "Trials")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--seed", a->seed, "Seed")->capture_default_str();
        cmd->callback([a] {
            const auto g = theory::gain_ratio_experiment(a->rho1, a->rho2, a->alpha, a->k, a->trials, a->seed);
            nlohmann::ordered_json j;
            j["gain1"] = g.gain1;
            j["gain2"] = g.gain2;
            j["empirical_ratio"] = g.empirical_ratio ? nlohmann::json(*g.empirical_ratio) : nlohmann::json();
            j["exact_ratio"] = g.exact_ratio ? nlohmann::json(*g.exact_ratio) : nlohmann::json();
            j["predicted_ratio"] = number_or_null(g.predicted_ratio);
            j["approximation_valid"] = g.approximation_valid;
            std::cout << j.dump(2) << '\n';
        });
    }
    {
        auto a = std::make_shared<CoveringArgs>();
        auto* cmd = app.add_subcommand("covering-study", "Measure rho for every operator and perturbation kind");
        cmd->add_option("--corpus-size", a->corpus_size, "Corpus clips")->capture_default_str();
        cmd->add_option("--corpus-seed", a->corpus_seed, "Corpus seed")->capture_default_str();
        cmd->add_option("--kinds", a->kinds, "Perturbation kinds")->delimiter(',')->capture_default_str();
        cmd->add_option("--trials", a->options.trials, "Trials per cell")->capture_default_str();
        cmd->add_option("--seed", a->options.seed, "Seed")->capture_default_str();
        cmd->add_option("--args", a->args, "Operator arguments")
            ->check(CLI::IsMember({"defaults", "matched-inverse"}))
            ->capture_default_str();
        cmd->add_flag("--with-identity", a->with_identity, "Add the identity operator as a calibration row");
        cmd->add_option("--workers", a->options.workers, "Threads")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--out", a->out, "CSV path (default stdout)");
        cmd->callback([a] { run_covering(*a); });
    }
}

} // namespace tws::cli
