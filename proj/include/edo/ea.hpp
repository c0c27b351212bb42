#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "edo/core.hpp"
#include "edo/fptas.hpp"
#include "edo/instance_gen.hpp"
#include "edo/rng.hpp"
#include "edo/variation.hpp"

namespace edo {

struct EaConfig {
    std::int64_t mu = 25;
    double epsilon = 0.5;
    double p_c = 0.0;
    MutationOp mutation{MutationKind::bf};
    bool repair_enabled = true;
    std::int64_t budget = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (mu < 1) throw ParameterError("population size must be positive");
        if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0,1)");
        if (!(p_c >= 0.0 && p_c <= 1.0)) throw ParameterError("crossover probability must lie in [0,1]");
        if (p_c > 0.0 && mu < 2) throw ParameterError("crossover needs a population of at least two");
        if (budget < 1) throw ParameterError("budget must be at least one iteration");
    }
};

struct RunRecord {
    EaConfig config;
    GenSpec instance_ref;
    QualityBound bound;
    Packing seed_packing;
    std::int64_t fptas_value = 0;
    std::int64_t accepted_count = 0;
    Population final_population;
    /// H(P) after each iteration; entry 0 is the initial all-copies population.
    std::vector<double> entropy_trace;

    double final_entropy() const { return entropy_trace.back(); }
};

/// Index of the member whose removal leaves the population with maximal
/// entropy. Ties go to the lowest index.
inline std::size_t select_survivor(const Population& pop) {
    if (pop.size() < 2) throw ContractError("survivor selection needs at least two members");
    const EntropyBasis basis(static_cast<std::int64_t>(pop.size()) - 1);
    std::size_t best = 0;
    double best_h = detail::entropy_without(pop, 0, basis);
    for (std::size_t k = 1; k < pop.size(); ++k) {
        const double h = detail::entropy_without(pop, k, basis);
        if (h > best_h) {
            best_h = h;
            best = k;
        }
    }
    return best;
}

inline std::size_t select_survivor(const Population& pop, std::int64_t mu) {
    if (static_cast<std::int64_t>(pop.size()) != mu + 1)
        throw ContractError("survivor selection expects mu + 1 members");
    return select_survivor(pop);
}

inline bool is_feasible(const Instance& inst, const Packing& x, std::int64_t W, std::int64_t v_min) {
    return total_weight(inst, x) <= W && total_value(inst, x) >= v_min;
}

/// One run of the (mu+1) EA for diversity optimization.
///
/// The population starts as mu copies of an (eps/2)-FPTAS packing x' and every
/// member must keep w <= W and v >= ceil((1 - eps/2) v(x')). Each iteration
/// builds exactly one offspring (crossover with probability p_c, else a copy of
/// a uniform member), mutates it, optionally repairs it, and admits it only if
/// feasible; the member whose removal maximizes entropy is then dropped.
inline RunRecord run(const Instance& inst, std::int64_t W, const EaConfig& cfg,
                     std::optional<std::int64_t> opt_reference = std::nullopt,
                     std::int64_t dp_cell_cap = kDefaultDpCellCap) {
    cfg.validate();
    if (W <= 0) throw ParameterError("capacity must be positive");

    RunRecord rec;
    rec.config = cfg;
    rec.instance_ref = GenSpec{inst.kind(), static_cast<std::int64_t>(inst.size()), inst.range(), inst.gen_seed()};

    const ApproxResult seed = fptas_solve(inst, W, cfg.epsilon / 2.0, dp_cell_cap);
    rec.seed_packing = seed.packing;
    rec.fptas_value = seed.value;
    rec.bound = QualityBound{quality_threshold(seed.value, cfg.epsilon), W, cfg.epsilon, opt_reference};
    const std::int64_t v_min = rec.bound.v_min;

    Rng rng(cfg.seed);
    Population pop = Population::copies(seed.packing, static_cast<std::size_t>(cfg.mu));
    rec.entropy_trace.reserve(static_cast<std::size_t>(cfg.budget) + 1);
    const EntropyBasis basis(cfg.mu);
    rec.entropy_trace.push_back(entropy_from_frequencies(pop.freq(), basis));

    const auto mu = static_cast<std::uint64_t>(cfg.mu);
    for (std::int64_t it = 1; it <= cfg.budget; ++it) {
        Packing x;
        if (cfg.p_c > 0.0 && rng.bernoulli(cfg.p_c)) {
            const auto a = rng.below(mu);
            auto b = rng.below(mu - 1);
            if (b >= a) ++b;
            x = crossover(pop[a], pop[b], inst, v_min, pop.freq());
        } else {
            x = pop[rng.below(mu)];
        }
        x = cfg.mutation.apply(x, pop.freq(), cfg.mu, rng);
        if (cfg.repair_enabled) x = repair(x, inst, v_min, W, pop.freq());

        if (is_feasible(inst, x, W, v_min)) {
            ++rec.accepted_count;
            pop.add(std::move(x));
            pop.remove(select_survivor(pop, cfg.mu));
        }
        rec.entropy_trace.push_back(entropy_from_frequencies(pop.freq(), basis));
    }
    rec.final_population = std::move(pop);
    return rec;
}

/// Iterations kept when a trace is persisted: all of them up to 10^4,
/// otherwise 100 evenly spaced checkpoints plus iteration mu and the last one.
inline std::vector<std::int64_t> trace_checkpoints(std::int64_t budget, std::int64_t mu,
                                                   std::int64_t full_limit = 10'000) {
    std::vector<std::int64_t> its;
    if (budget <= full_limit) {
        for (std::int64_t i = 0; i <= budget; ++i) its.push_back(i);
        return its;
    }
    for (std::int64_t k = 0; k <= 100; ++k) its.push_back(k * budget / 100);
    if (mu <= budget) its.push_back(mu);
    std::sort(its.begin(), its.end());
    its.erase(std::unique(its.begin(), its.end()), its.end());
    return its;
}

}  // namespace edo
